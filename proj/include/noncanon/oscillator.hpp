// oscillator.hpp - single-oscillator Hilbert space span{|s,kappa,n>}, the
// frequency operator, Hamiltonian, momentum, projector-valued ladder operators
// and their noncanonical algebra.
//
// Basis indexing is mode-major, excitation-minor:
//   flat(mode, n) = mode * (N_max + 1) + n.
// All algebraic identities are asserted on the valid subspace n < N_max, where
// truncation of the ladder does not interfere.

#pragma once

#include "noncanon/modes.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace noncanon {

struct BasisIndex {
  std::size_t mode = 0;
  int n = 0;
};

class OscillatorSpace {
 public:
  OscillatorSpace(ModeSet modes, int n_max) : modes_(std::move(modes)), n_max_(n_max) {
    if (n_max_ < 1) throw std::invalid_argument("OscillatorSpace: N_max must be >= 1");
  }

  const ModeSet& modes() const { return modes_; }
  int n_max() const { return n_max_; }
  int levels() const { return n_max_ + 1; }
  Index dim() const { return static_cast<Index>(modes_.size()) * levels(); }
  double hbar() const { return modes_.hbar(); }

  Index flat(std::size_t mode, int n) const { return static_cast<Index>(mode) * levels() + n; }
  BasisIndex unflat(Index i) const {
    return {static_cast<std::size_t>(i / levels()), static_cast<int>(i % levels())};
  }

  /// Mask of basis states with n < N_max.
  std::vector<bool> valid_mask() const {
    std::vector<bool> keep(static_cast<std::size_t>(dim()));
    for (Index i = 0; i < dim(); ++i) keep[static_cast<std::size_t>(i)] = unflat(i).n < n_max_;
    return keep;
  }

  StateVector basis_state(std::size_t mode, int n) const {
    StateVector v = StateVector::Zero(dim());
    v(flat(mode, n)) = 1.0;
    return v;
  }

 private:
  ModeSet modes_;
  int n_max_;
};

/// a = sum_n sqrt(n+1) |n><n+1| on levels 0..N_max.
inline SparseOp ladder(int n_max) {
  if (n_max < 1) throw std::invalid_argument("ladder: N_max must be >= 1");
  SparseOp a(n_max + 1, n_max + 1);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int n = 0; n < n_max; ++n) t.emplace_back(n, n + 1, std::sqrt(static_cast<double>(n + 1)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

/// |mode><mode| (x) X for a single-oscillator (N_max+1)-level operator X.
inline SparseOp embed_in_mode(const OscillatorSpace& space, std::size_t mode, const SparseOp& x) {
  if (mode >= space.modes().size()) throw std::out_of_range("embed_in_mode: unknown mode");
  SparseOp out(space.dim(), space.dim());
  std::vector<Eigen::Triplet<cplx>> t;
  const Index off = space.flat(mode, 0);
  for (Index k = 0; k < x.outerSize(); ++k)
    for (SparseOp::InnerIterator it(x, k); it; ++it) t.emplace_back(off + it.row(), off + it.col(), it.value());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

/// a_{s,kappa} = |s,kappa><s,kappa| (x) a.
inline SparseOp mode_annihilator(const OscillatorSpace& space, std::size_t mode) {
  return embed_in_mode(space, mode, ladder(space.n_max()));
}

inline SparseOp mode_annihilator(const OscillatorSpace& space, const Mode& m) {
  return mode_annihilator(space, space.modes().index_of(m));
}

inline SparseOp mode_creator(const OscillatorSpace& space, std::size_t mode) {
  return SparseOp(mode_annihilator(space, mode).adjoint());
}

/// 1_{s,kappa} = |s,kappa><s,kappa| (x) 1.
inline SparseOp mode_identity(const OscillatorSpace& space, std::size_t mode) {
  return embed_in_mode(space, mode, sparse_identity(space.levels()));
}

/// Omega = sum omega |s,kappa><s,kappa| (x) 1.
inline SparseOp frequency_operator(const OscillatorSpace& space) {
  Eigen::VectorXcd d(space.dim());
  for (Index i = 0; i < space.dim(); ++i) d(i) = space.modes()[space.unflat(i).mode].omega;
  return diagonal_operator(d);
}

/// H = hbar Omega (x) (a^dag a + 1/2); eigenvalue hbar omega (n + 1/2) on every level.
inline SparseOp hamiltonian(const OscillatorSpace& space) {
  Eigen::VectorXcd d(space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    const auto b = space.unflat(i);
    d(i) = space.hbar() * space.modes()[b.mode].omega * (b.n + 0.5);
  }
  return diagonal_operator(d);
}

/// P = sum hbar kappa |s,kappa><s,kappa| (x) (a^dag a + 1/2), one operator per axis.
inline std::array<SparseOp, 3> momentum(const OscillatorSpace& space) {
  std::array<SparseOp, 3> p;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::VectorXcd d(space.dim());
    for (Index i = 0; i < space.dim(); ++i) {
      const auto b = space.unflat(i);
      d(i) = space.hbar() * space.modes()[b.mode].kappa(axis) * (b.n + 0.5);
    }
    p[static_cast<std::size_t>(axis)] = diagonal_operator(d);
  }
  return p;
}

/// H assembled as 1/2 sum hbar omega (a^dag a + a a^dag); differs from
/// hamiltonian() only on the top rung.
inline SparseOp hamiltonian_from_ladders(const OscillatorSpace& space) {
  SparseOp h(space.dim(), space.dim());
  for (std::size_t k = 0; k < space.modes().size(); ++k) {
    const SparseOp a = mode_annihilator(space, k);
    const SparseOp ad = a.adjoint();
    h += (0.5 * space.hbar() * space.modes()[k].omega) * SparseOp(ad * a + a * ad);
  }
  return h;
}

/// Noncanonical algebra on the valid subspace, one entry per identity.
inline CheckReport algebra_report(const OscillatorSpace& space, double tol = 1e-12) {
  const std::size_t nm = space.modes().size();
  const auto keep = space.valid_mask();
  std::vector<SparseOp> a(nm), ad(nm), one(nm);
  for (std::size_t k = 0; k < nm; ++k) {
    a[k] = mode_annihilator(space, k);
    ad[k] = a[k].adjoint();
    one[k] = mode_identity(space, k);
  }
  const SparseOp zero(space.dim(), space.dim());
  double dev_comm = 0.0, dev_comm_distinct = 0.0, dev_aa = 0.0, dev_adad = 0.0;
  SparseOp sum(space.dim(), space.dim());
  for (std::size_t k = 0; k < nm; ++k) {
    for (std::size_t l = 0; l < nm; ++l) {
      const SparseOp c = commutator(a[k], ad[l]);
      if (k == l) {
        dev_comm = std::max(dev_comm, restricted_deviation(c, one[k], keep));
        sum += c;
        dev_aa = std::max(dev_aa, restricted_deviation(SparseOp(a[k] * a[l]), SparseOp(a[k] * a[k]), keep));
        dev_adad = std::max(dev_adad, restricted_deviation(SparseOp(ad[k] * ad[l]), SparseOp(ad[k] * ad[k]), keep));
      } else {
        dev_comm_distinct = std::max(dev_comm_distinct, max_abs(c));
        dev_aa = std::max(dev_aa, restricted_deviation(SparseOp(a[k] * a[l]), zero, keep));
        dev_adad = std::max(dev_adad, restricted_deviation(SparseOp(ad[k] * ad[l]), zero, keep));
      }
    }
  }
  const double dev_id = restricted_deviation(sum, sparse_identity(space.dim()), keep);

  CheckReport r("noncanonical single-oscillator algebra (n < N_max)");
  r.require_at_most("[a_k, a_l^dag] = delta_kl 1_k", std::max(dev_comm, dev_comm_distinct), tol);
  r.require_at_most("[a_k, a_l^dag] = 0 (k != l, full space)", dev_comm_distinct, 0.0);
  r.require_at_most("a_k a_l = delta_kl a_k^2", dev_aa, tol);
  r.require_at_most("a_k^dag a_l^dag = delta_kl (a_k^dag)^2", dev_adad, tol);
  r.require_at_most("sum_k [a_k, a_k^dag] = 1", dev_id, tol);
  return r;
}

/// e^{iHt/hbar} op e^{-iHt/hbar}, by dense exponentiation.
inline DenseOp heisenberg_evolve(const DenseOp& op, const DenseOp& h, double t, double hbar = 1.0) {
  if (op.rows() != h.rows() || op.cols() != h.cols() || h.rows() != h.cols())
    throw std::invalid_argument("heisenberg_evolve: dimension mismatch");
  if (max_abs(DenseOp(h - h.adjoint())) > 1e-12 * std::max(1.0, max_abs(h)))
    throw std::invalid_argument("heisenberg_evolve: H is not Hermitian");
  const DenseOp gen = (I * (t / hbar)) * h;
  const DenseOp u = gen.exp();
  return u * op * u.adjoint();
}

inline DenseOp heisenberg_evolve(const SparseOp& op, const SparseOp& h, double t, double hbar = 1.0) {
  return heisenberg_evolve(DenseOp(op), DenseOp(h), t, hbar);
}

inline cplx expectation(const StateVector& psi, const SparseOp& op) { return psi.dot(op * psi); }

/// sum |psi(mode, n)|^2 hbar omega (n + 1/2).
inline double average_energy(const StateVector& psi, const OscillatorSpace& space, bool allow_unnormalized = false) {
  if (psi.size() != space.dim()) throw std::invalid_argument("average_energy: dimension mismatch");
  if (!allow_unnormalized && std::abs(psi.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("average_energy: state is not normalized");
  double e = 0.0;
  for (Index i = 0; i < psi.size(); ++i) {
    const auto b = space.unflat(i);
    e += std::norm(psi(i)) * space.hbar() * space.modes()[b.mode].omega * (b.n + 0.5);
  }
  return e;
}

}  // namespace noncanon
