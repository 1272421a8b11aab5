// multi.hpp - direct sum of symmetric k-oscillator sectors, k = 1..M.
//
// A sector is stored in the occupation (multiset) basis over the
// single-oscillator basis of dimension d: a basis vector is a sorted list of
// k single-oscillator indices, representing the normalized symmetrized
// product (1/sqrt(D)) sum over distinct arrangements, D = k!/prod m_b!.
//
// An operator X on one oscillator extends to sector k as c_k sum_i X_i. Its
// action on an occupation state is the bosonic one-body rule
//   X_ba sqrt(n_a) sqrt(n_b + 1 - delta_ab) |n - e_a + e_b>.

#pragma once

#include "noncanon/fields.hpp"

#include <functional>
#include <map>
#include <optional>

namespace noncanon {

using Occupation = std::vector<int>;

/// k!/prod m_b! for a sorted occupation.
inline double arrangement_count(const Occupation& occ) {
  double d = std::tgamma(static_cast<double>(occ.size()) + 1.0);
  std::size_t i = 0;
  while (i < occ.size()) {
    std::size_t j = i;
    while (j < occ.size() && occ[j] == occ[i]) ++j;
    d /= std::tgamma(static_cast<double>(j - i) + 1.0);
    i = j;
  }
  return d;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

inline std::string occupation_label(const Occupation& occ) {
  std::string s;
  for (std::size_t i = 0; i < occ.size(); ++i) s += (i ? ";" : "") + std::to_string(occ[i]);
  return s;
}

class SectorBasis {
 public:
  SectorBasis(Index d, int k) : d_(d), k_(k) {
    if (d < 1 || k < 1) throw std::invalid_argument("SectorBasis: need d >= 1 and k >= 1");
    Occupation occ(static_cast<std::size_t>(k), 0);
    while (true) {
      index_.emplace(occ, static_cast<Index>(states_.size()));
      states_.push_back(occ);
      // next nondecreasing tuple in lexicographic order
      int pos = k - 1;
      while (pos >= 0 && occ[static_cast<std::size_t>(pos)] == d - 1) --pos;
      if (pos < 0) break;
      const int v = occ[static_cast<std::size_t>(pos)] + 1;
      for (int q = pos; q < k; ++q) occ[static_cast<std::size_t>(q)] = v;
    }
  }

  Index single_dim() const { return d_; }
  int k() const { return k_; }
  Index dim() const { return static_cast<Index>(states_.size()); }
  const Occupation& operator[](Index i) const { return states_[static_cast<std::size_t>(i)]; }
  std::optional<Index> find(const Occupation& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Index index_of(const Occupation& occ) const {
    auto i = find(occ);
    if (!i) throw std::out_of_range("SectorBasis: occupation not in basis");
    return *i;
  }

 private:
  Index d_;
  int k_;
  std::vector<Occupation> states_;
  std::map<Occupation, Index> index_;
};

/// Calls emit(new_occupation, coefficient) for every term of (sum_i X_i)|occ>.
template <class Emit>
void apply_one_body(const SparseOp& x, const Occupation& occ, Emit&& emit) {
  std::size_t i = 0;
  while (i < occ.size()) {
    std::size_t j = i;
    while (j < occ.size() && occ[j] == occ[i]) ++j;
    const int a = occ[i];
    const double n_a = static_cast<double>(j - i);
    for (SparseOp::InnerIterator it(x, a); it; ++it) {
      const int b = static_cast<int>(it.row());
      if (b == a) {
        emit(occ, it.value() * n_a);
        continue;
      }
      Occupation next = occ;
      next.erase(next.begin() + static_cast<long>(i));
      const auto pos = std::lower_bound(next.begin(), next.end(), b);
      const auto upper = std::upper_bound(next.begin(), next.end(), b);
      const double n_b = static_cast<double>(upper - pos);
      next.insert(pos, b);
      emit(next, it.value() * std::sqrt(n_a * (n_b + 1.0)));
    }
    i = j;
  }
}

/// sum_i X_i restricted to one symmetric sector (weight 1).
inline SparseOp extend_to_sector(const SparseOp& x, const SectorBasis& basis) {
  if (x.rows() != basis.single_dim() || x.cols() != basis.single_dim())
    throw std::invalid_argument("extend_to_sector: operator dimension does not match sector");
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index col = 0; col < basis.dim(); ++col)
    apply_one_body(x, basis[col], [&](const Occupation& occ, cplx v) { t.emplace_back(basis.index_of(occ), col, v); });
  SparseOp out(basis.dim(), basis.dim());
  out.setFromTriplets(t.begin(), t.end());
  out.prune(cplx{0.0});
  return out;
}

/// Per-sector constants c_k, k = 1..M, with c_k^2 kept alongside so that
/// c_k = 1/sqrt(k) gives exactly 1/k.
struct ExtensionWeights {
  std::vector<double> c;
  std::vector<double> c2;

  static ExtensionWeights inverse_sqrt(int m) {
    ExtensionWeights w;
    for (int k = 1; k <= m; ++k) {
      w.c.push_back(1.0 / std::sqrt(static_cast<double>(k)));
      w.c2.push_back(1.0 / static_cast<double>(k));
    }
    return w;
  }
  static ExtensionWeights ones(int m) {
    const std::vector<double> v(static_cast<std::size_t>(m), 1.0);
    return {v, v};
  }
  static ExtensionWeights explicit_values(std::vector<double> values) {
    ExtensionWeights w;
    for (double v : values) {
      if (!(v > 0.0)) throw std::invalid_argument("ExtensionWeights: c_k must be > 0");
      w.c.push_back(v);
      w.c2.push_back(v * v);
    }
    return w;
  }

  int max_sector() const { return static_cast<int>(c.size()); }
  double operator()(int k) const { return c.at(static_cast<std::size_t>(k - 1)); }
  double sq(int k) const { return c2.at(static_cast<std::size_t>(k - 1)); }
  /// Weights c_k^2 (used for the bold projectors).
  ExtensionWeights squared() const {
    ExtensionWeights w;
    w.c = c2;
    for (double v : c2) w.c2.push_back(v * v);
    return w;
  }
};

/// Single-oscillator space plus sectors 1..M.
class MultiSpace {
 public:
  MultiSpace(OscillatorSpace single, int max_sector) : single_(std::move(single)), m_(max_sector) {
    if (m_ < 1) throw std::invalid_argument("MultiSpace: M must be >= 1");
    for (int k = 1; k <= m_; ++k) {
      sectors_.emplace_back(single_.dim(), k);
      const auto& b = sectors_.back();
      std::vector<bool> keep(static_cast<std::size_t>(b.dim()));
      for (Index i = 0; i < b.dim(); ++i)
        keep[static_cast<std::size_t>(i)] =
            std::all_of(b[i].begin(), b[i].end(), [&](int o) { return single_.unflat(o).n < single_.n_max(); });
      masks_.push_back(std::move(keep));
    }
  }

  const OscillatorSpace& single() const { return single_; }
  int max_sector() const { return m_; }
  const SectorBasis& sector(int k) const { return sectors_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<bool>& valid_mask(int k) const { return masks_.at(static_cast<std::size_t>(k - 1)); }
  Index total_dim() const {
    Index n = 0;
    for (const auto& s : sectors_) n += s.dim();
    return n;
  }

  /// Rows k, dim, C(d+k-1, k).
  std::string dimension_table() const {
    std::ostringstream os;
    os << "k  dim  binomial(d+k-1,k)\n";
    for (int k = 1; k <= m_; ++k)
      os << k << "  " << sector(k).dim() << "  " << binomial(static_cast<int>(single_.dim()) + k - 1, k) << '\n';
    return os.str();
  }

 private:
  OscillatorSpace single_;
  int m_;
  std::vector<SectorBasis> sectors_;
  std::vector<std::vector<bool>> masks_;
};

/// Block-diagonal operator over sectors 1..M.
class BoldOperator {
 public:
  BoldOperator() = default;
  explicit BoldOperator(std::vector<SparseOp> blocks) : blocks_(std::move(blocks)) {}

  int max_sector() const { return static_cast<int>(blocks_.size()); }
  const SparseOp& block(int k) const { return blocks_.at(static_cast<std::size_t>(k - 1)); }
  SparseOp& block(int k) { return blocks_.at(static_cast<std::size_t>(k - 1)); }

  BoldOperator adjoint() const {
    std::vector<SparseOp> b;
    for (const auto& x : blocks_) b.emplace_back(x.adjoint());
    return BoldOperator(std::move(b));
  }

  friend BoldOperator operator*(const BoldOperator& x, const BoldOperator& y) {
    return zip(x, y, [](const SparseOp& a, const SparseOp& b) { return SparseOp(a * b); });
  }
  friend BoldOperator operator+(const BoldOperator& x, const BoldOperator& y) {
    return zip(x, y, [](const SparseOp& a, const SparseOp& b) { return SparseOp(a + b); });
  }
  friend BoldOperator operator-(const BoldOperator& x, const BoldOperator& y) {
    return zip(x, y, [](const SparseOp& a, const SparseOp& b) { return SparseOp(a - b); });
  }
  friend BoldOperator operator*(cplx s, const BoldOperator& x) {
    std::vector<SparseOp> b;
    for (const auto& a : x.blocks_) b.emplace_back(s * a);
    return BoldOperator(std::move(b));
  }

  /// All sectors as one block-diagonal matrix, sector 1 first.
  SparseOp assemble() const {
    Index n = 0;
    for (const auto& b : blocks_) n += b.rows();
    std::vector<Eigen::Triplet<cplx>> t;
    Index off = 0;
    for (const auto& b : blocks_) {
      for (Index k = 0; k < b.outerSize(); ++k)
        for (SparseOp::InnerIterator it(b, k); it; ++it) t.emplace_back(off + it.row(), off + it.col(), it.value());
      off += b.rows();
    }
    SparseOp out(n, n);
    out.setFromTriplets(t.begin(), t.end());
    return out;
  }

 private:
  template <class F>
  static BoldOperator zip(const BoldOperator& x, const BoldOperator& y, F f) {
    if (x.blocks_.size() != y.blocks_.size()) throw std::invalid_argument("BoldOperator: sector count mismatch");
    std::vector<SparseOp> b;
    for (std::size_t i = 0; i < x.blocks_.size(); ++i) b.push_back(f(x.blocks_[i], y.blocks_[i]));
    return BoldOperator(std::move(b));
  }

  std::vector<SparseOp> blocks_;
};

inline BoldOperator commutator(const BoldOperator& x, const BoldOperator& y) { return x * y - y * x; }

/// c_1 X (+) c_2 (X(x)1 + 1(x)X) (+) ... up to sector M.
inline BoldOperator extend_operator(const MultiSpace& space, const SparseOp& x, const ExtensionWeights& w) {
  if (w.max_sector() < space.max_sector()) throw std::invalid_argument("extend_operator: fewer weights than sectors");
  std::vector<SparseOp> blocks;
  for (int k = 1; k <= space.max_sector(); ++k) blocks.push_back(w(k) * extend_to_sector(x, space.sector(k)));
  return BoldOperator(std::move(blocks));
}

/// Largest per-sector deviation on occupations with every n < N_max.
inline double restricted_deviation(const MultiSpace& space, const BoldOperator& x, const BoldOperator& y) {
  double r = 0.0;
  for (int k = 1; k <= space.max_sector(); ++k)
    r = std::max(r, restricted_deviation(x.block(k), y.block(k), space.valid_mask(k)));
  return r;
}

inline BoldOperator bold_identity(const MultiSpace& space) {
  std::vector<SparseOp> b;
  for (int k = 1; k <= space.max_sector(); ++k) b.push_back(sparse_identity(space.sector(k).dim()));
  return BoldOperator(std::move(b));
}

inline BoldOperator bold_zero(const MultiSpace& space) {
  std::vector<SparseOp> b;
  for (int k = 1; k <= space.max_sector(); ++k) b.emplace_back(space.sector(k).dim(), space.sector(k).dim());
  return BoldOperator(std::move(b));
}

/// Generator of time translations: sum_i H_i in every sector (weights 1).
inline BoldOperator free_generator(const MultiSpace& space) {
  return extend_operator(space, hamiltonian(space.single()), ExtensionWeights::ones(space.max_sector()));
}

/// Field Hamiltonian 1/2 sum hbar omega (a^dag a + a a^dag) built from bold operators.
inline BoldOperator bold_field_hamiltonian(const MultiSpace& space, const ExtensionWeights& w) {
  BoldOperator h = bold_zero(space);
  const auto& ms = space.single().modes();
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const BoldOperator a = extend_operator(space, mode_annihilator(space.single(), m), w);
    const BoldOperator ad = a.adjoint();
    h = h + cplx{0.5 * ms.hbar() * ms[m].omega} * (ad * a + a * ad);
  }
  return h;
}

inline CheckReport bold_algebra_report(const MultiSpace& space, const ExtensionWeights& w, double tol = 1e-12) {
  const OscillatorSpace& single = space.single();
  const std::size_t nm = single.modes().size();
  const ExtensionWeights w2 = w.squared();
  std::vector<BoldOperator> a, ad, one;
  for (std::size_t m = 0; m < nm; ++m) {
    a.push_back(extend_operator(space, mode_annihilator(single, m), w));
    ad.push_back(a.back().adjoint());
    one.push_back(extend_operator(space, mode_identity(single, m), w2));
  }
  const BoldOperator zero = bold_zero(space);
  double dev_distinct = 0.0, dev_same = 0.0, dev_aa = 0.0, dev_adad = 0.0;
  BoldOperator sum = bold_zero(space);
  for (std::size_t k = 0; k < nm; ++k) {
    sum = sum + one[k];
    for (std::size_t l = 0; l < nm; ++l) {
      const BoldOperator c = commutator(a[k], ad[l]);
      if (k == l)
        dev_same = std::max(dev_same, restricted_deviation(space, c, one[k]));
      else
        dev_distinct = std::max(dev_distinct, restricted_deviation(space, c, zero));
      dev_aa = std::max(dev_aa, restricted_deviation(space, commutator(a[k], a[l]), zero));
      dev_adad = std::max(dev_adad, restricted_deviation(space, commutator(ad[k], ad[l]), zero));
    }
  }
  CheckReport r("bold (multi-oscillator) algebra, occupations with n < N_max");
  r.require_at_most("[a_k, a_l^dag] = 0 (k != l)", dev_distinct, tol);
  r.require_at_most("[a_k, a_k^dag] = 1_k", dev_same, tol);
  r.require_at_most("[a_k, a_l] = 0", dev_aa, tol);
  r.require_at_most("[a_k^dag, a_l^dag] = 0", dev_adad, tol);
  r.require_at_most("sum_k 1_k = 1", restricted_deviation(space, sum, bold_identity(space)), tol);
  if (space.max_sector() >= 2) {
    const BoldOperator sq = one[0] * one[0] - one[0];
    r.require_above("|1_k^2 - 1_k| in sector 2 (nonidempotent)",
                    restricted_deviation(sq.block(2), SparseOp(sq.block(2).rows(), sq.block(2).cols()),
                                         space.valid_mask(2)),
                    0.1);
    if (nm >= 2) {
      const BoldOperator prod = a[0] * a[1];
      r.require_above("|a_k a_l| in sector 2, k != l (no single-oscillator rule)",
                      restricted_deviation(prod.block(2), SparseOp(prod.block(2).rows(), prod.block(2).cols()),
                                           space.valid_mask(2)),
                      0.1);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

struct MultiState {
  std::vector<StateVector> sectors;  // index k-1

  double norm() const {
    double s = 0.0;
    for (const auto& v : sectors) s += v.squaredNorm();
    return std::sqrt(s);
  }
  cplx dot(const MultiState& other) const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < sectors.size(); ++i) s += sectors[i].dot(other.sectors[i]);
    return s;
  }
};

inline MultiState apply(const BoldOperator& x, const MultiState& psi) {
  MultiState out;
  for (int k = 1; k <= x.max_sector(); ++k)
    out.sectors.push_back(x.block(k) * psi.sectors.at(static_cast<std::size_t>(k - 1)));
  return out;
}

inline cplx expectation(const MultiState& psi, const BoldOperator& x) { return psi.dot(apply(x, psi)); }

inline MultiState zero_state(const MultiSpace& space) {
  MultiState s;
  for (int k = 1; k <= space.max_sector(); ++k) s.sectors.push_back(StateVector::Zero(space.sector(k).dim()));
  return s;
}

/// Coefficients on the sector basis of the symmetric tensor T: sqrt(D) T(b_1..b_k).
inline StateVector symmetric_from_tensor(const SectorBasis& basis,
                                         const std::function<cplx(const Occupation&)>& tensor) {
  StateVector v(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) v(i) = std::sqrt(arrangement_count(basis[i])) * tensor(basis[i]);
  return v;
}

/// |v>^{(x)k} on the sector basis.
inline StateVector power_state(const SectorBasis& basis, const StateVector& v) {
  return symmetric_from_tensor(basis, [&](const Occupation& occ) {
    cplx p = 1.0;
    for (int b : occ) p *= v(b);
    return p;
  });
}

/// CSV rows k, occupation multiset, Re, Im (nonzero amplitudes only).
inline std::string multistate_csv(const MultiSpace& space, const MultiState& psi) {
  std::ostringstream os;
  os.precision(17);
  os << "k,occupation,re,im\n";
  for (int k = 1; k <= space.max_sector(); ++k) {
    const auto& v = psi.sectors.at(static_cast<std::size_t>(k - 1));
    for (Index i = 0; i < v.size(); ++i)
      if (v(i) != cplx{0.0})
        os << k << ',' << occupation_label(space.sector(k)[i]) << ',' << v(i).real() << ',' << v(i).imag() << '\n';
  }
  return os.str();
}

/// Ground-profile amplitudes phi (per mode) and sector probabilities p_k.
struct VacuumSpec {
  std::vector<cplx> phi;
  std::vector<double> p;  // index k-1

  void validate(std::size_t n_modes) const {
    if (phi.size() != n_modes) throw std::invalid_argument("VacuumSpec: one phi per mode required");
    double n = 0.0;
    for (auto f : phi) n += std::norm(f);
    if (std::abs(n - 1.0) > 1e-12) throw std::invalid_argument("VacuumSpec: sum |phi|^2 must be 1");
    double s = 0.0;
    for (double q : p) {
      if (q < 0.0) throw std::invalid_argument("VacuumSpec: p_k must be >= 0");
      s += q;
    }
    if (p.empty() || std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("VacuumSpec: sum p_k must be 1");
  }
  int support_max_sector() const {
    for (int k = static_cast<int>(p.size()); k >= 1; --k)
      if (p[static_cast<std::size_t>(k - 1)] > 0.0) return k;
    return 0;
  }
  double p_at(int k) const { return k >= 1 && k <= static_cast<int>(p.size()) ? p[static_cast<std::size_t>(k - 1)] : 0.0; }
};

/// sum_m phi_m |m, 0>.
inline StateVector ground_profile(const OscillatorSpace& single, const std::vector<cplx>& phi) {
  StateVector v = StateVector::Zero(single.dim());
  for (std::size_t m = 0; m < phi.size(); ++m) v(single.flat(m, 0)) = phi[m];
  return v;
}

/// sqrt(p_1)|phi> (+) sqrt(p_2)|phi>|phi> (+) ...
inline MultiState vacuum_state(const MultiSpace& space, const VacuumSpec& v) {
  v.validate(space.single().modes().size());
  if (v.support_max_sector() > space.max_sector()) throw std::invalid_argument("vacuum_state: p_k support exceeds M");
  const StateVector phi = ground_profile(space.single(), v.phi);
  MultiState s;
  for (int k = 1; k <= space.max_sector(); ++k)
    s.sectors.push_back(std::sqrt(v.p_at(k)) * power_state(space.sector(k), phi));
  return s;
}

/// sum_k k p_k <phi|H|phi>.
inline double vacuum_energy(const MultiSpace& space, const VacuumSpec& v) {
  v.validate(space.single().modes().size());
  if (v.support_max_sector() > space.max_sector()) throw std::invalid_argument("vacuum_energy: p_k support exceeds M");
  const double single = average_energy(ground_profile(space.single(), v.phi), space.single());
  double mean_count = 0.0;
  for (int k = 1; k <= space.max_sector(); ++k) mean_count += k * v.p_at(k);
  return mean_count * single;
}

/// Eigenstate of the bold annihilator of `mode`: sector k holds
/// f_k |mode, alpha/(k c_k)>^{(x)k}.
inline MultiState generalized_coherent(const MultiSpace& space, std::size_t mode, cplx alpha,
                                       const std::vector<cplx>& f, const ExtensionWeights& w,
                                       double tail_tol = 1e-8) {
  if (static_cast<int>(f.size()) > space.max_sector())
    throw std::invalid_argument("generalized_coherent: f has support beyond M");
  double nf = 0.0;
  for (auto x : f) nf += std::norm(x);
  if (std::abs(nf - 1.0) > 1e-12) throw std::invalid_argument("generalized_coherent: sum |f_k|^2 must be 1");
  const OscillatorSpace& single = space.single();
  MultiState s = zero_state(space);
  for (int k = 1; k <= static_cast<int>(f.size()); ++k) {
    const cplx fk = f[static_cast<std::size_t>(k - 1)];
    if (fk == cplx{0.0}) continue;
    StateVector one = StateVector::Zero(single.dim());
    one.segment(single.flat(mode, 0), single.levels()) = coherent_state(alpha / (k * w(k)), single.n_max(), tail_tol);
    s.sectors[static_cast<std::size_t>(k - 1)] = fk * power_state(space.sector(k), one);
  }
  return s;
}

struct CoherentEnergies {
  double generator_closed = 0.0;      // <calH>
  double field_closed = 0.0;          // <bold H>
  double generator_matrix = 0.0;
  double field_matrix = 0.0;
  double vacuum_difference = 0.0;     // 1/2 sum hbar omega |Phi|^2 (sum k|f|^2 - sum |f|^2)
};

/// Averages of calH and bold H in sum_m Phi_m |alpha_m>, each |alpha_m> built with the same f.
inline CoherentEnergies coherent_energies(const MultiSpace& space, const CoherentFieldSpec& spec,
                                          const std::vector<cplx>& f, const ExtensionWeights& w) {
  const OscillatorSpace& single = space.single();
  spec.validate(single.modes().size());
  CoherentEnergies out;
  double sum_f_over_kc2 = 0.0, sum_kf = 0.0, sum_kc2f = 0.0, sum_f = 0.0;
  for (int k = 1; k <= static_cast<int>(f.size()); ++k) {
    const double fk2 = std::norm(f[static_cast<std::size_t>(k - 1)]);
    sum_f_over_kc2 += fk2 / (k * w.sq(k));
    sum_kf += k * fk2;
    sum_kc2f += k * w.sq(k) * fk2;
    sum_f += fk2;
  }
  MultiState psi = zero_state(space);
  for (std::size_t m = 0; m < single.modes().size(); ++m) {
    const double phi2 = std::norm(spec.phi[m]);
    const double hw = single.hbar() * single.modes()[m].omega;
    const double a2 = std::norm(spec.alpha[m]);
    out.generator_closed += phi2 * hw * (a2 * sum_f_over_kc2 + 0.5 * sum_kf);
    out.field_closed += phi2 * hw * (a2 + 0.5 * sum_kc2f);
    out.vacuum_difference += 0.5 * phi2 * hw * (sum_kf - sum_f);
    if (spec.phi[m] == cplx{0.0}) continue;
    const MultiState am = generalized_coherent(space, m, spec.alpha[m], f, w);
    for (std::size_t s = 0; s < psi.sectors.size(); ++s) psi.sectors[s] += spec.phi[m] * am.sectors[s];
  }
  out.generator_matrix = expectation(psi, free_generator(space)).real();
  out.field_matrix = expectation(psi, bold_field_hamiltonian(space, w)).real();
  return out;
}

struct SpectrumRow {
  std::string label;
  int oscillators = 0;
  int excitation = 0;
  double value = 0.0;     // <s|calH|s>
  double residual = 0.0;  // |calH s - value s|
  double expected = 0.0;  // m hbar omega (n + 1/2)
};

/// calH on |mode, n>^{(x)m}, the state with m oscillators all at level n.
inline SpectrumRow sector_level(const MultiSpace& space, const BoldOperator& generator, std::size_t mode, int m, int n) {
  const auto& basis = space.sector(m);
  const Occupation occ(static_cast<std::size_t>(m), static_cast<int>(space.single().flat(mode, n)));
  StateVector s = StateVector::Zero(basis.dim());
  s(basis.index_of(occ)) = 1.0;
  const StateVector hs = generator.block(m) * s;
  SpectrumRow row;
  row.oscillators = m;
  row.excitation = n;
  row.value = s.dot(hs).real();
  row.residual = (hs - row.value * s).norm();
  row.expected = m * space.single().hbar() * space.single().modes()[mode].omega * (n + 0.5);
  return row;
}

/// One-oscillator vs two-oscillator ground and "two-quanta" states.
inline std::vector<SpectrumRow> sector_energy_spectrum_demo(const MultiSpace& space, std::size_t mode = 0) {
  if (space.max_sector() < 2 || space.single().n_max() < 2)
    throw std::invalid_argument("sector_energy_spectrum_demo: needs M >= 2 and N_max >= 2");
  const BoldOperator gen = free_generator(space);
  std::vector<SpectrumRow> rows;
  auto add = [&](std::string label, int m, int n) {
    rows.push_back(sector_level(space, gen, mode, m, n));
    rows.back().label = std::move(label);
  };
  add("|0>", 1, 0);
  add("|0>|0>", 2, 0);
  add("|2>", 1, 2);
  add("|1>|1>", 2, 1);
  return rows;
}

}  // namespace noncanon
