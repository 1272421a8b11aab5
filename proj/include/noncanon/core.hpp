// core.hpp - scalar/operator aliases and the pass/fail check report shared by
// every module.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace noncanon {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using SparseOp = Eigen::SparseMatrix<cplx>;
using DenseOp = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Bilinear (non-conjugating) dot product of two complex 3-vectors.
inline cplx bdot(const CVec3& a, const CVec3& b) { return a(0) * b(0) + a(1) * b(1) + a(2) * b(2); }

inline CVec3 cross(const Vec3& n, const CVec3& e) {
  return {n(1) * e(2) - n(2) * e(1), n(2) * e(0) - n(0) * e(2), n(0) * e(1) - n(1) * e(0)};
}

inline double max_abs(const SparseOp& m) {
  double r = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

inline double max_abs(const DenseOp& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline SparseOp commutator(const SparseOp& a, const SparseOp& b) {
  SparseOp r = a * b - b * a;
  r.prune(cplx{0.0});
  return r;
}

inline SparseOp sparse_identity(Index n) {
  SparseOp id(n, n);
  id.setIdentity();
  return id;
}

inline SparseOp diagonal_operator(const Eigen::VectorXcd& diag) {
  SparseOp d(diag.size(), diag.size());
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index i = 0; i < diag.size(); ++i)
    if (diag(i) != cplx{0.0}) t.emplace_back(i, i, diag(i));
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

/// Largest entry of P (A - B) P, where P is the diagonal mask `keep`.
inline double restricted_deviation(const SparseOp& a, const SparseOp& b, const std::vector<bool>& keep) {
  SparseOp diff = a - b;
  double r = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    if (!keep[static_cast<std::size_t>(k)]) continue;
    for (SparseOp::InnerIterator it(diff, k); it; ++it)
      if (keep[static_cast<std::size_t>(it.row())]) r = std::max(r, std::abs(it.value()));
  }
  return r;
}

inline double restricted_deviation(const DenseOp& a, const DenseOp& b, const std::vector<bool>& keep) {
  double r = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    if (!keep[static_cast<std::size_t>(j)]) continue;
    for (Index i = 0; i < a.rows(); ++i)
      if (keep[static_cast<std::size_t>(i)]) r = std::max(r, std::abs(a(i, j) - b(i, j)));
  }
  return r;
}

inline bool is_hermitian(const SparseOp& m, double tol = 1e-12) {
  SparseOp adj = m.adjoint();
  return max_abs(SparseOp(m - adj)) <= tol;
}

/// One line of a check report. `upper` entries pass when value <= bound,
/// witness entries (upper = false) pass when value > bound.
struct CheckEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;
  bool passed = false;
};

class CheckReport {
 public:
  explicit CheckReport(std::string title = {}) : title_(std::move(title)) {}

  void require_at_most(std::string name, double value, double bound) {
    entries_.push_back({std::move(name), value, bound, true, value <= bound});
  }
  void require_above(std::string name, double value, double bound) {
    entries_.push_back({std::move(name), value, bound, false, value > bound});
  }
  void merge(const CheckReport& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  }

  const std::string& title() const { return title_; }
  const std::vector<CheckEntry>& entries() const { return entries_; }
  const CheckEntry* find(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }
  bool all_passed() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return e.passed; });
  }

  std::string to_text() const {
    std::size_t width = 8;
    for (const auto& e : entries_) width = std::max(width, e.name.size());
    std::ostringstream os;
    if (!title_.empty()) os << "# " << title_ << '\n';
    char buf[64];
    for (const auto& e : entries_) {
      os << e.name << std::string(width - e.name.size() + 2, ' ');
      std::snprintf(buf, sizeof buf, "%12.4e  %s %9.2e  ", e.value, e.upper ? "<=" : "> ", e.bound);
      os << buf << (e.passed ? "PASS" : "FAIL") << '\n';
    }
    return os.str();
  }

 private:
  std::string title_;
  std::vector<CheckEntry> entries_;
};

}  // namespace noncanon
