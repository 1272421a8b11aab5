// fields.hpp - mode-sum field operators A, E, B at a spacetime point,
// coherent-state field averages and the energy-momentum identities.

#pragma once

#include "noncanon/oscillator.hpp"

#include <span>

namespace noncanon {

enum class FieldKind { A, E, B };

struct FieldPoint {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
};

namespace detail {

/// Coefficients multiplying a_m and a_m^dag in one Cartesian component.
struct ModeCoefficients {
  cplx lower;
  cplx raise;
};

inline ModeCoefficients field_coefficients(const ModeSet& ms, std::size_t m, FieldKind kind, int component,
                                           const FieldPoint& p) {
  const Mode& mode = ms[m];
  const double hbar = ms.hbar();
  const double w = mode.omega;
  const cplx phase = std::exp(-I * (w * p.t - mode.kappa.dot(p.x)));
  const CVec3 e = polarization(mode);
  const auto j = static_cast<Index>(component);
  switch (kind) {
    case FieldKind::A: {
      const double weight = std::sqrt(hbar / (2.0 * w * ms.volume()));
      return {weight * phase * e(j), weight * std::conj(phase) * std::conj(e(j))};
    }
    case FieldKind::E: {
      const double weight = std::sqrt(hbar * w / (2.0 * ms.volume()));
      return {I * weight * phase * e(j), -I * weight * std::conj(phase) * std::conj(e(j))};
    }
    case FieldKind::B: {
      const double weight = std::sqrt(hbar * w / (2.0 * ms.volume()));
      const CVec3 ne = cross(mode.direction(), e);
      const CVec3 ne_conj = cross(mode.direction(), CVec3(e.conjugate()));
      return {I * weight * phase * ne(j), -I * weight * std::conj(phase) * ne_conj(j)};
    }
  }
  return {0.0, 0.0};
}

}  // namespace detail

/// One Cartesian component (0, 1, 2) of A, E or B at point p.
inline SparseOp field_operator(const OscillatorSpace& space, FieldKind kind, int component, const FieldPoint& p = {}) {
  if (component < 0 || component > 2) throw std::invalid_argument("field_operator: component must be 0, 1 or 2");
  const ModeSet& ms = space.modes();
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const auto c = detail::field_coefficients(ms, m, kind, component, p);
    for (int n = 0; n < space.n_max(); ++n) {
      const double s = std::sqrt(static_cast<double>(n + 1));
      t.emplace_back(space.flat(m, n), space.flat(m, n + 1), s * c.lower);
      t.emplace_back(space.flat(m, n + 1), space.flat(m, n), s * c.raise);
    }
  }
  SparseOp f(space.dim(), space.dim());
  f.setFromTriplets(t.begin(), t.end());
  return f;
}

inline std::array<SparseOp, 3> field_vector(const OscillatorSpace& space, FieldKind kind, const FieldPoint& p = {}) {
  return {field_operator(space, kind, 0, p), field_operator(space, kind, 1, p), field_operator(space, kind, 2, p)};
}

/// e^{iP.x/hbar} op e^{-iP.x/hbar} with P.x = H t - P.x, by dense exponentiation.
inline DenseOp translate(const OscillatorSpace& space, const SparseOp& op, const FieldPoint& p) {
  const auto mom = momentum(space);
  SparseOp gen = p.t * hamiltonian(space);
  for (int j = 0; j < 3; ++j) gen -= p.x(j) * mom[static_cast<std::size_t>(j)];
  const DenseOp u = DenseOp((I / space.hbar()) * DenseOp(gen)).exp();
  return u * DenseOp(op) * u.adjoint();
}

// ---------------------------------------------------------------------------
// Coherent states
// ---------------------------------------------------------------------------

/// |alpha|^{N+1} / sqrt((N+1)!), the first omitted coefficient.
inline double coherent_tail_bound(cplx alpha, int n_max) {
  const double r = std::abs(alpha);
  if (r == 0.0) return 0.0;
  return std::exp((n_max + 1) * std::log(r) - 0.5 * std::lgamma(n_max + 2.0));
}

/// Truncated normalized sum_{n <= N_max} alpha^n / sqrt(n!) |n>.
inline StateVector coherent_state(cplx alpha, int n_max, double tail_tol = 1e-8) {
  if (coherent_tail_bound(alpha, n_max) >= tail_tol)
    throw std::domain_error("coherent_state: truncation tail too large for |alpha| at this N_max");
  StateVector v(n_max + 1);
  v(0) = 1.0;
  for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  v.normalize();
  return v;
}

/// Superposition amplitudes Phi and coherent parameters alpha, indexed by mode.
struct CoherentFieldSpec {
  std::vector<cplx> phi;
  std::vector<cplx> alpha;

  void validate(std::size_t n_modes) const {
    if (phi.size() != n_modes || alpha.size() != n_modes)
      throw std::invalid_argument("CoherentFieldSpec: one Phi and one alpha per mode required");
    double norm = 0.0;
    for (const auto& f : phi) norm += std::norm(f);
    if (std::abs(norm - 1.0) > 1e-12) throw std::invalid_argument("CoherentFieldSpec: sum |Phi|^2 must be 1");
  }
};

/// sum Phi_m |m> |alpha_m>.
inline StateVector coherent_state_vector(const OscillatorSpace& space, const CoherentFieldSpec& spec) {
  spec.validate(space.modes().size());
  StateVector psi = StateVector::Zero(space.dim());
  for (std::size_t m = 0; m < space.modes().size(); ++m) {
    if (spec.phi[m] == cplx{0.0}) continue;
    psi.segment(space.flat(m, 0), space.levels()) = spec.phi[m] * coherent_state(spec.alpha[m], space.n_max());
  }
  return psi;
}

/// Closed-form <Psi| F(t,x) |Psi> for a coherent superposition.
inline CVec3 coherent_field_average(const OscillatorSpace& space, const CoherentFieldSpec& spec, FieldKind kind,
                                    const FieldPoint& p) {
  spec.validate(space.modes().size());
  for (std::size_t m = 0; m < space.modes().size(); ++m)
    if (spec.phi[m] != cplx{0.0} && coherent_tail_bound(spec.alpha[m], space.n_max()) >= 1e-8)
      throw std::domain_error("coherent_field_average: truncation tail too large for requested |alpha|");
  CVec3 out = CVec3::Zero();
  for (std::size_t m = 0; m < space.modes().size(); ++m) {
    const double weight = std::norm(spec.phi[m]);
    if (weight == 0.0) continue;
    for (int j = 0; j < 3; ++j) {
      const auto c = detail::field_coefficients(space.modes(), m, kind, j, p);
      out(j) += weight * (c.lower * spec.alpha[m] + c.raise * std::conj(spec.alpha[m]));
    }
  }
  return out;
}

/// sum hbar omega |Phi|^2 (|alpha|^2 + 1/2).
inline double coherent_energy(const OscillatorSpace& space, const CoherentFieldSpec& spec) {
  spec.validate(space.modes().size());
  double e = 0.0;
  for (std::size_t m = 0; m < space.modes().size(); ++m)
    e += space.hbar() * space.modes()[m].omega * std::norm(spec.phi[m]) * (std::norm(spec.alpha[m]) + 0.5);
  return e;
}

/// CSV rows t,x,y,z,Re Fx,Im Fx,Re Fy,Im Fy,Re Fz,Im Fz.
inline std::string field_average_csv(std::span<const FieldPoint> points, std::span<const CVec3> values) {
  std::ostringstream os;
  os.precision(17);
  os << "t,x,y,z,re_x,im_x,re_y,im_y,re_z,im_z\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    os << p.t << ',' << p.x(0) << ',' << p.x(1) << ',' << p.x(2);
    for (int j = 0; j < 3; ++j) os << ',' << values[i](j).real() << ',' << values[i](j).imag();
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Energy-momentum identities
// ---------------------------------------------------------------------------

/// E.E + B.B at p.
inline SparseOp energy_density_integrand(const OscillatorSpace& space, const FieldPoint& p) {
  const auto e = field_vector(space, FieldKind::E, p);
  const auto b = field_vector(space, FieldKind::B, p);
  SparseOp s(space.dim(), space.dim());
  for (std::size_t j = 0; j < 3; ++j) s += SparseOp(e[j] * e[j]) + SparseOp(b[j] * b[j]);
  return s;
}

/// (E x B)_j at p, with operator order kept (E left of B).
inline std::array<SparseOp, 3> cross_product(const std::array<SparseOp, 3>& u, const std::array<SparseOp, 3>& v) {
  return {SparseOp(u[1] * v[2] - u[2] * v[1]), SparseOp(u[2] * v[0] - u[0] * v[2]),
          SparseOp(u[0] * v[1] - u[1] * v[0])};
}

inline CheckReport energy_momentum_identity_check(const OscillatorSpace& space, std::span<const FieldPoint> points,
                                                  double tol = 1e-11) {
  if (points.size() < 3) throw std::invalid_argument("energy_momentum_identity_check: need >= 3 sample points");
  const auto keep = space.valid_mask();
  const double vol = space.modes().volume();
  const double c = space.modes().constants().c_light;
  const SparseOp h = hamiltonian(space);
  const auto mom = momentum(space);

  const SparseOp first = energy_density_integrand(space, points[0]);
  double dev_position = 0.0, dev_h = 0.0, dev_p = 0.0, dev_anti = 0.0;
  for (const auto& p : points) {
    const SparseOp integrand = energy_density_integrand(space, p);
    dev_position = std::max(dev_position, max_abs(SparseOp(integrand - first)));
    dev_h = std::max(dev_h, restricted_deviation(SparseOp((0.5 * vol) * integrand), h, keep));

    const auto e = field_vector(space, FieldKind::E, p);
    const auto b = field_vector(space, FieldKind::B, p);
    const auto exb = cross_product(e, b);
    const auto bxe = cross_product(b, e);
    for (std::size_t j = 0; j < 3; ++j) {
      dev_p = std::max(dev_p, restricted_deviation(SparseOp(vol * exb[j]), SparseOp(c * mom[j]), keep));
      dev_anti = std::max(dev_anti, max_abs(SparseOp(exb[j] + bxe[j])));
    }
  }
  CheckReport r("energy-momentum identities");
  r.require_at_most("E.E + B.B position independent", dev_position, tol);
  r.require_at_most("V/2 (E.E + B.B) = H (n < N_max)", dev_h, tol);
  r.require_at_most("V (E x B) = c P (n < N_max)", dev_p, tol);
  r.require_at_most("E x B = -B x E", dev_anti, tol);
  return r;
}

struct EbCommutator {
  SparseOp matrix;
  SparseOp closed_form;
  double deviation = 0.0;  // on n < N_max
};

/// [E_alpha, B_beta] by matrix arithmetic and by the closed form
/// sum i hbar omega s/(2V) (delta_ab - n_a n_b) 1_{s,kappa}.
inline EbCommutator eb_commutator(const OscillatorSpace& space, int alpha, int beta, const FieldPoint& p = {}) {
  if (alpha < 0 || alpha > 2 || beta < 0 || beta > 2) throw std::invalid_argument("eb_commutator: bad component");
  EbCommutator out;
  out.matrix = commutator(field_operator(space, FieldKind::E, alpha, p), field_operator(space, FieldKind::B, beta, p));
  out.closed_form = SparseOp(space.dim(), space.dim());
  const ModeSet& ms = space.modes();
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const Vec3 n = ms[m].direction();
    const double proj = (alpha == beta ? 1.0 : 0.0) - n(alpha) * n(beta);
    const cplx coef = I * ms.hbar() * ms[m].omega * (ms[m].s / (2.0 * ms.volume())) * proj;
    out.closed_form += coef * mode_identity(space, m);
  }
  out.deviation = restricted_deviation(out.matrix, out.closed_form, space.valid_mask());
  return out;
}

}  // namespace noncanon
