// perturbation.hpp - atom-field interaction in the rotating-wave and dipole
// approximations; first-order emission amplitudes and rates, second-order
// two-quanta amplitudes in the k-oscillator sectors.
//
// Atom (x) field states are indexed field-major, atom-minor: 2 i + a for a
// two-level atom with a = 0 ground (-), a = 1 excited (+).

#pragma once

#include "noncanon/multi.hpp"

#include <functional>
#include <set>

namespace noncanon {

struct TwoLevelAtom {
  double omega0 = 1.0;
  double d = 1.0;
  CVec3 u = CVec3(1.0, 0.0, 0.0);

  void validate() const {
    if (!(omega0 > 0.0)) throw std::invalid_argument("TwoLevelAtom: omega0 must be > 0");
    if (std::abs(u.norm() - 1.0) > 1e-12) throw std::invalid_argument("TwoLevelAtom: |u| must be 1");
  }
};

/// g = i sqrt(1/(2 hbar omega V)) e.u (bilinear).
inline cplx coupling(const ModeSet& ms, std::size_t m, const TwoLevelAtom& atom) {
  atom.validate();
  return I * std::sqrt(1.0 / (2.0 * ms.hbar() * ms[m].omega * ms.volume())) * bdot(polarization(ms[m]), atom.u);
}

/// (e^{-i delta t} - 1)/delta, with its limit -i t at delta = 0.
inline cplx emission_quotient(double delta, double t) {
  const double x = delta * t;
  if (std::abs(x) < 1e-3) return t * (-I - x / 2.0 + I * x * x / 6.0 + x * x * x / 24.0);
  return (std::exp(-I * x) - 1.0) / delta;
}

/// delta^(T)(E) = sin(E T / 2 hbar)/(pi E); T/(2 pi hbar) at E = 0.
inline double delta_T(double e, double t, double hbar = 1.0) {
  const double x = e * t / (2.0 * hbar);
  if (std::abs(x) < 1e-4) return t / (2.0 * pi * hbar) * (1.0 - x * x / 6.0);
  return std::sin(x) / (pi * e);
}

namespace detail {

/// L(t) = hbar omega0 d sum g e^{i(omega0 - omega)t} a_m on one oscillator.
inline SparseOp rwa_lowering(const TwoLevelAtom& atom, const OscillatorSpace& space, double t) {
  const ModeSet& ms = space.modes();
  SparseOp l(space.dim(), space.dim());
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const cplx g = coupling(ms, m, atom);
    if (g == cplx{0.0}) continue;
    const cplx f = ms.hbar() * atom.omega0 * atom.d * g * std::exp(I * (atom.omega0 - ms[m].omega) * t);
    l += f * mode_annihilator(space, m);
  }
  return l;
}

/// L (x) sigma_+ + L^dag (x) sigma_-.
inline SparseOp with_two_level(const SparseOp& l) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index k = 0; k < l.outerSize(); ++k)
    for (SparseOp::InnerIterator it(l, k); it; ++it) {
      t.emplace_back(2 * it.row() + 1, 2 * it.col(), it.value());
      t.emplace_back(2 * it.col(), 2 * it.row() + 1, std::conj(it.value()));
    }
  SparseOp out(2 * l.rows(), 2 * l.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace detail

/// Interaction-picture H_I(t) on H_1 (x) C^2.
inline SparseOp rwa_interaction(const TwoLevelAtom& atom, const OscillatorSpace& space, double t) {
  atom.validate();
  return detail::with_two_level(detail::rwa_lowering(atom, space, t));
}

/// H_I(t) on every sector (x) C^2; the field part in sector k is c_k sum_i L_i.
inline BoldOperator rwa_interaction(const TwoLevelAtom& atom, const MultiSpace& space, const ExtensionWeights& w,
                                    double t) {
  atom.validate();
  const SparseOp l = detail::rwa_lowering(atom, space.single(), t);
  std::vector<SparseOp> blocks;
  for (int k = 1; k <= space.max_sector(); ++k)
    blocks.push_back(detail::with_two_level(SparseOp(w(k) * extend_to_sector(l, space.sector(k)))));
  return BoldOperator(std::move(blocks));
}

/// Excited atom (x) sum psi(m, n)|m, n>.
inline StateVector excited_initial_state(const OscillatorSpace& space, const StateVector& field) {
  if (field.size() != space.dim()) throw std::invalid_argument("excited_initial_state: dimension mismatch");
  StateVector s = StateVector::Zero(2 * space.dim());
  for (Index i = 0; i < field.size(); ++i) s(2 * i + 1) = field(i);
  return s;
}

/// |psi0> plus its first-order correction at time t.
inline StateVector first_order_state(const TwoLevelAtom& atom, const OscillatorSpace& space, const StateVector& initial,
                                     double t) {
  atom.validate();
  if (initial.size() != 2 * space.dim()) throw std::invalid_argument("first_order_state: dimension mismatch");
  const ModeSet& ms = space.modes();
  StateVector out = initial;
  for (Index i = 0; i < space.dim(); ++i) {
    if (initial(2 * i) != cplx{0.0})
      throw std::invalid_argument("first_order_state: initial state must have the atom excited");
    const cplx psi = initial(2 * i + 1);
    if (psi == cplx{0.0}) continue;
    const auto b = space.unflat(i);
    if (b.n == space.n_max())
      throw std::invalid_argument("first_order_state: initial amplitude on the top level N_max");
    const double delta = atom.omega0 - ms[b.mode].omega;
    out(2 * space.flat(b.mode, b.n + 1)) += atom.omega0 * atom.d * std::conj(coupling(ms, b.mode, atom)) *
                                            emission_quotient(delta, t) * std::sqrt(b.n + 1.0) * psi;
  }
  return out;
}

struct EmissionRate {
  double p = 0.0;
  double p_old = 0.0;
  double ratio = 0.0;
  double profile_at_omega0 = 0.0;
  std::size_t levels_in_window = 0;  // distinct omega with |omega0 - omega| < 2 pi / T
  bool resolved = true;
  std::string warning;
};

/// P = 2 pi omega0^2 d^2 sum F(omega)|g|^2 (2 pi/T) [delta^(T)(omega0 - omega)]^2,
/// which is sum |first-order amplitude|^2 / T. P_old uses F = 1.
inline EmissionRate emission_rate(const TwoLevelAtom& atom, const std::function<double(double)>& profile,
                                  const ModeSet& ms, double t) {
  atom.validate();
  if (!(t > 0.0)) throw std::invalid_argument("emission_rate: T must be > 0");
  EmissionRate r;
  std::set<long long> levels;
  const double window = 2.0 * pi / t;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const double delta = atom.omega0 - ms[m].omega;
    const double dt = delta_T(delta, t);
    const double k = 2.0 * pi * atom.omega0 * atom.omega0 * atom.d * atom.d * std::norm(coupling(ms, m, atom)) *
                     (2.0 * pi / t) * dt * dt;
    const double f = profile(ms[m].omega);
    if (f < 0.0) throw std::invalid_argument("emission_rate: profile must be >= 0");
    r.p += f * k;
    r.p_old += k;
    if (std::abs(delta) < window) levels.insert(std::llround(ms[m].omega * 1e9));
  }
  if (!(r.p_old > 0.0)) throw std::domain_error("emission_rate: no mode couples to the atom");
  r.ratio = r.p / r.p_old;
  r.profile_at_omega0 = profile(atom.omega0);
  r.levels_in_window = levels.size();
  if (r.levels_in_window < 8) {
    r.resolved = false;
    r.warning = "T too small for the mode spacing: " + std::to_string(r.levels_in_window) +
                " frequency levels within 2 pi/T of omega0";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Multi-oscillator first order
// ---------------------------------------------------------------------------

/// <S(B)| v_1 (x) ... (x) v_k> for every multiset B reachable from the slot supports.
inline std::map<Occupation, cplx> symmetrize_product(const std::vector<StateVector>& slots) {
  std::vector<std::vector<std::pair<int, cplx>>> support(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (Index b = 0; b < slots[i].size(); ++b)
      if (slots[i](b) != cplx{0.0}) support[i].emplace_back(static_cast<int>(b), slots[i](b));
  std::map<Occupation, cplx> out;
  Occupation tuple(slots.size());
  std::function<void(std::size_t, cplx)> rec = [&](std::size_t i, cplx prod) {
    if (i == slots.size()) {
      Occupation occ = tuple;
      std::sort(occ.begin(), occ.end());
      out[occ] += prod / std::sqrt(arrangement_count(occ));
      return;
    }
    for (const auto& [b, v] : support[i]) {
      tuple[i] = b;
      rec(i + 1, prod * v);
    }
  };
  rec(0, 1.0);
  return out;
}

/// <v_1|...<v_k| psi> for a symmetric sector vector psi.
inline cplx product_bra_amplitude(const SectorBasis& basis, const std::vector<StateVector>& bra_slots,
                                  const StateVector& psi) {
  if (static_cast<int>(bra_slots.size()) != basis.k()) throw std::invalid_argument("product_bra_amplitude: need k slots");
  cplx s = 0.0;
  for (const auto& [occ, c] : symmetrize_product(bra_slots)) s += std::conj(c) * psi(basis.index_of(occ));
  return s;
}

struct MultiFirstOrder {
  std::vector<StateVector> sectors;       // sector (x) C^2, zeroth plus first order
  std::vector<double> sector_probability; // norm^2 of the ground-atom part per sector
  double rate_factor = 0.0;               // sum k c_k^2 p_k
};

/// Excited atom (x) vacuum_state(v), evolved to first order in every sector.
inline MultiFirstOrder multi_first_order(const TwoLevelAtom& atom, const MultiSpace& space, const VacuumSpec& v,
                                         const ExtensionWeights& w, double t) {
  atom.validate();
  const OscillatorSpace& single = space.single();
  const ModeSet& ms = single.modes();
  v.validate(ms.size());
  if (v.support_max_sector() > space.max_sector())
    throw std::invalid_argument("multi_first_order: vacuum support exceeds M");
  if (w.max_sector() < space.max_sector()) throw std::invalid_argument("multi_first_order: fewer weights than sectors");
  const MultiState vac = vacuum_state(space, v);

  // amplitude carried by a slot raised from (m, 0) to (m, 1), without c_k
  std::vector<cplx> raised(ms.size());
  for (std::size_t m = 0; m < ms.size(); ++m)
    raised[m] = atom.omega0 * atom.d * std::conj(coupling(ms, m, atom)) *
                emission_quotient(atom.omega0 - ms[m].omega, t) * v.phi[m];

  MultiFirstOrder out;
  for (int k = 1; k <= space.max_sector(); ++k) {
    const auto& basis = space.sector(k);
    const double scale = std::sqrt(v.p_at(k)) * w(k);
    const StateVector corr = symmetric_from_tensor(basis, [&](const Occupation& occ) {
      cplx sum = 0.0;
      for (std::size_t i = 0; i < occ.size(); ++i) {
        const auto bi = single.unflat(occ[i]);
        if (bi.n != 1) continue;
        cplx term = raised[bi.mode];
        for (std::size_t j = 0; j < occ.size() && term != cplx{0.0}; ++j) {
          if (j == i) continue;
          const auto bj = single.unflat(occ[j]);
          term *= bj.n == 0 ? v.phi[bj.mode] : cplx{0.0};
        }
        sum += term;
      }
      return scale * sum;
    });
    StateVector full = StateVector::Zero(2 * basis.dim());
    const StateVector& zeroth = vac.sectors[static_cast<std::size_t>(k - 1)];
    for (Index i = 0; i < basis.dim(); ++i) {
      full(2 * i + 1) = zeroth(i);
      full(2 * i) = corr(i);
    }
    out.sectors.push_back(std::move(full));
    out.sector_probability.push_back(corr.squaredNorm());
    out.rate_factor += k * w.sq(k) * v.p_at(k);
  }
  return out;
}

/// Ground-atom part of one sector of a sector (x) C^2 vector.
inline StateVector ground_atom_part(const StateVector& s) {
  StateVector g(s.size() / 2);
  for (Index i = 0; i < g.size(); ++i) g(i) = s(2 * i);
  return g;
}

// ---------------------------------------------------------------------------
// Second order, no rotating-wave approximation
// ---------------------------------------------------------------------------

struct MultiLevelAtom {
  std::vector<double> energies;
  std::array<DenseOp, 3> p;  // p[j](b, c) = <b|p_j|c>
  double charge = 1.0;
  double mass = 1.0;

  int levels() const { return static_cast<int>(energies.size()); }
  CVec3 p_elem(int b, int c) const { return {p[0](b, c), p[1](b, c), p[2](b, c)}; }

  void validate() const {
    const auto l = static_cast<Index>(energies.size());
    if (l < 2) throw std::invalid_argument("MultiLevelAtom: need at least 2 levels");
    if (!(mass > 0.0)) throw std::invalid_argument("MultiLevelAtom: mass must be > 0");
    for (const auto& pj : p) {
      if (pj.rows() != l || pj.cols() != l) throw std::invalid_argument("MultiLevelAtom: p must be L x L");
      if (max_abs(DenseOp(pj - pj.adjoint())) > 1e-12)
        throw std::invalid_argument("MultiLevelAtom: p_cb must equal conj(p_bc)");
    }
  }
};

/// Hand-chosen Hermitian fixtures: "three-level", "four-level", "dark" (no
/// transverse dipole channel along z-propagating modes).
inline MultiLevelAtom fixture_atom(const std::string& id) {
  MultiLevelAtom a;
  auto fill = [&](int l) {
    for (auto& pj : a.p) pj = DenseOp::Zero(l, l);
  };
  auto set = [&](int b, int c, const CVec3& v) {
    for (int j = 0; j < 3; ++j) {
      a.p[static_cast<std::size_t>(j)](b, c) = v(j);
      a.p[static_cast<std::size_t>(j)](c, b) = std::conj(v(j));
    }
  };
  if (id == "three-level") {
    a.energies = {0.0, 1.3, 3.1};
    fill(3);
    set(0, 1, CVec3(0.4, cplx(0.2, -0.3), 0.1));
    set(1, 2, CVec3(cplx(0.1, 0.5), -0.2, cplx(0.3, 0.2)));
    set(0, 2, CVec3(0.25, cplx(0.0, 0.15), -0.35));
    set(1, 1, CVec3(0.05, 0.0, 0.0));
  } else if (id == "four-level") {
    a.energies = {0.0, 0.9, 2.2, 3.7};
    fill(4);
    set(0, 1, CVec3(0.3, cplx(0.1, 0.2), -0.2));
    set(0, 2, CVec3(cplx(-0.1, 0.3), 0.2, 0.15));
    set(0, 3, CVec3(0.2, -0.1, cplx(0.05, 0.1)));
    set(1, 2, CVec3(0.35, cplx(0.0, -0.25), 0.1));
    set(1, 3, CVec3(cplx(0.2, 0.1), 0.3, -0.15));
    set(2, 3, CVec3(-0.25, 0.1, cplx(0.2, -0.2)));
  } else if (id == "dark") {
    a.energies = {0.0, 1.3, 3.1};
    fill(3);
    set(0, 1, CVec3(0.0, 0.0, 0.4));
    set(1, 2, CVec3(0.0, 0.0, cplx(0.2, 0.1)));
    set(0, 2, CVec3(0.0, 0.0, -0.3));
  } else {
    throw std::invalid_argument("fixture_atom: unknown fixture '" + id + "'");
  }
  a.validate();
  return a;
}

using FockKey = std::pair<int, Occupation>;  // (atom level, occupation)
using FockVector = std::map<FockKey, cplx>;

struct AmplitudeResult {
  cplx value = 0.0;
  int sector = 0;
  std::size_t mode1 = 0;
  std::size_t mode2 = 0;
  int initial_level = 0;
  int final_level = 0;
  double duration = 0.0;
};

class DipoleCoupling {
 public:
  DipoleCoupling(const OscillatorSpace& space, const MultiLevelAtom& atom)
      : space_(space), atom_(atom), a_(field_vector(space, FieldKind::A)) {
    atom_.validate();
  }

  /// c_k V|psi>, V = -(e/m) sum_j A_j(0) (x) p_j, A_j extended over the sector.
  FockVector apply(const FockVector& psi, double ck) const {
    FockVector out;
    const double pref = -atom_.charge / atom_.mass * ck;
    for (const auto& [key, amp] : psi) {
      const auto& [level, occ] = key;
      for (std::size_t j = 0; j < 3; ++j) {
        const DenseOp& pj = atom_.p[j];
        for (int lp = 0; lp < atom_.levels(); ++lp) {
          const cplx pa = pj(lp, level);
          if (pa == cplx{0.0}) continue;
          apply_one_body(a_[j], occ, [&](const Occupation& next, cplx v) {
            out[{lp, next}] += pref * pa * v * amp;
          });
        }
      }
    }
    return out;
  }

  double energy(const FockKey& key) const {
    double e = atom_.energies.at(static_cast<std::size_t>(key.first));
    for (int o : key.second) {
      const auto b = space_.unflat(o);
      e += space_.hbar() * space_.modes()[b.mode].omega * (b.n + 0.5);
    }
    return e;
  }

  const OscillatorSpace& space() const { return space_; }
  const MultiLevelAtom& atom() const { return atom_; }

 private:
  OscillatorSpace space_;
  MultiLevelAtom atom_;
  std::array<SparseOp, 3> a_;
};

/// -2 pi i sum_F sum_I sum_i f_F^* V_FI V_Ii psi_i delta^(T)(E_i - E_F)/(E_i - E_I + i eta).
inline cplx second_order_amplitude(const DipoleCoupling& v, double ck, const FockVector& initial,
                                   const FockVector& final_ket, double t, double eta = 1e-6,
                                   bool allow_near_resonant = false) {
  if (!(eta > 0.0)) throw std::invalid_argument("second_order_amplitude: eta must be > 0");
  const double hbar = v.space().hbar();
  cplx sum = 0.0;
  for (const auto& [fkey, fcoef] : final_ket) {
    const double ef = v.energy(fkey);
    const FockVector g = v.apply({{fkey, 1.0}}, ck);  // (V|F>)_I = conj(<F|V|I>)
    for (const auto& [ikey, gval] : g) {
      const double ei_mid = v.energy(ikey);
      const FockVector h = v.apply({{ikey, 1.0}}, ck);  // (V|I>)_i = conj(<I|V|i>)
      for (const auto& [key, hval] : h) {
        auto it = initial.find(key);
        if (it == initial.end()) continue;
        const double e0 = v.energy(key);
        const double den = e0 - ei_mid;
        if (std::abs(den) <= eta && !allow_near_resonant)
          throw std::domain_error("second_order_amplitude: energy denominator within eta of zero");
        sum += std::conj(fcoef) * std::conj(gval) * std::conj(hval) * it->second * delta_T(e0 - ef, t, hbar) /
               cplx(den, eta);
      }
    }
  }
  return -2.0 * pi * I * sum;
}

inline FockVector with_level(int level, const std::map<Occupation, cplx>& field) {
  FockVector out;
  for (const auto& [occ, c] : field) out[{level, occ}] = c;
  return out;
}

/// One-oscillator excited state |m, 1>.
inline StateVector excited_slot(const OscillatorSpace& space, std::size_t mode) { return space.basis_state(mode, 1); }

/// Second-order amplitude <b|<bra_1|...<bra_k| U |a>|phi>^{(x)k} in sector k, without sqrt(p_k).
inline cplx sector_two_quanta_amplitude(const DipoleCoupling& v, int a, int b, const StateVector& phi, int k,
                                        double ck, const std::vector<StateVector>& bra_slots, double t,
                                        double eta = 1e-6, bool allow_near_resonant = false) {
  if (static_cast<int>(bra_slots.size()) != k) throw std::invalid_argument("sector_two_quanta_amplitude: need k bra slots");
  const FockVector initial = with_level(a, symmetrize_product(std::vector<StateVector>(static_cast<std::size_t>(k), phi)));
  const FockVector fin = with_level(b, symmetrize_product(bra_slots));
  return second_order_amplitude(v, ck, initial, fin, t, eta, allow_near_resonant);
}

struct TwoQuantaTargets {
  std::size_t mode1 = 0;
  std::size_t mode2 = 1;
  int initial_level = 0;
  int final_level = 0;
};

/// sqrt(p_2) <b|<x|<y| U |a>|phi>|phi> in the two-oscillator sector.
inline AmplitudeResult second_order_two_quanta(const DipoleCoupling& v, const VacuumSpec& vac,
                                               const ExtensionWeights& w, int max_sector,
                                               const TwoQuantaTargets& tg, double t, double eta = 1e-6,
                                               bool allow_near_resonant = false) {
  const OscillatorSpace& space = v.space();
  vac.validate(space.modes().size());
  if (tg.mode1 == tg.mode2) throw std::invalid_argument("second_order_two_quanta: targets must be distinct");
  if (vac.support_max_sector() > max_sector) throw std::invalid_argument("second_order_two_quanta: vacuum support exceeds M");
  AmplitudeResult r{0.0, 2, tg.mode1, tg.mode2, tg.initial_level, tg.final_level, t};
  if (vac.p_at(2) == 0.0) return r;
  if (max_sector < 2 || w.max_sector() < 2) throw std::invalid_argument("second_order_two_quanta: needs M >= 2");
  const StateVector phi = ground_profile(space, vac.phi);
  r.value = std::sqrt(vac.p_at(2)) *
            sector_two_quanta_amplitude(v, tg.initial_level, tg.final_level, phi, 2, w(2),
                                        {excited_slot(space, tg.mode1), excited_slot(space, tg.mode2)}, t, eta,
                                        allow_near_resonant);
  return r;
}

/// Canonical second-order amplitude for |a, 0> -> |b, 1_1 1_2>, both orderings.
inline cplx standard_oracle_two_photon(const ModeSet& ms, const MultiLevelAtom& atom, const TwoQuantaTargets& tg,
                                       double t, double eta = 1e-6, bool allow_near_resonant = false) {
  atom.validate();
  if (tg.mode1 == tg.mode2) throw std::invalid_argument("standard_oracle_two_photon: targets must be distinct");
  const double hbar = ms.hbar();
  const double w1 = ms[tg.mode1].omega, w2 = ms[tg.mode2].omega;
  const CVec3 e1c = polarization(ms[tg.mode1]).conjugate();
  const CVec3 e2c = polarization(ms[tg.mode2]).conjugate();
  const double ea = atom.energies.at(static_cast<std::size_t>(tg.initial_level));
  const double eb = atom.energies.at(static_cast<std::size_t>(tg.final_level));
  cplx sum = 0.0;
  for (int c = 0; c < atom.levels(); ++c) {
    const double ec = atom.energies[static_cast<std::size_t>(c)];
    const double d2 = ea - ec - hbar * w2, d1 = ea - ec - hbar * w1;
    if ((std::abs(d1) <= eta || std::abs(d2) <= eta) && !allow_near_resonant)
      throw std::domain_error("standard_oracle_two_photon: energy denominator within eta of zero");
    sum += bdot(e1c, atom.p_elem(tg.final_level, c)) * bdot(e2c, atom.p_elem(c, tg.initial_level)) / cplx(d2, eta) +
           bdot(e2c, atom.p_elem(tg.final_level, c)) * bdot(e1c, atom.p_elem(c, tg.initial_level)) / cplx(d1, eta);
  }
  const double e2m2 = atom.charge * atom.charge / (atom.mass * atom.mass);
  const double weights = std::sqrt(hbar / (2.0 * w1 * ms.volume())) * std::sqrt(hbar / (2.0 * w2 * ms.volume()));
  return -2.0 * pi * I * e2m2 * weights * sum * delta_T(ea - eb - hbar * w1 - hbar * w2, t, hbar);
}

inline double relative_difference(cplx x, cplx y) {
  const double s = std::max(std::abs(x), std::abs(y));
  return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

struct ThreeOscillatorIdentity {
  cplx a2 = 0.0;
  cplx a3 = 0.0;
  std::vector<cplx> placements;  // bra (x,y,phi), (x,phi,y), (phi,x,y)
  CheckReport report{"three-oscillator sector identity"};
};

inline ThreeOscillatorIdentity three_oscillator_identity_check(const DipoleCoupling& v, const VacuumSpec& vac,
                                                               const ExtensionWeights& w, int max_sector,
                                                               const TwoQuantaTargets& tg, double t,
                                                               double eta = 1e-6, double tol = 1e-10) {
  if (max_sector < 3 || w.max_sector() < 3) throw std::invalid_argument("three_oscillator_identity_check: needs M >= 3");
  const OscillatorSpace& space = v.space();
  vac.validate(space.modes().size());
  const StateVector phi = ground_profile(space, vac.phi);
  const StateVector x = excited_slot(space, tg.mode1), y = excited_slot(space, tg.mode2);
  ThreeOscillatorIdentity out;
  auto amp = [&](int k, std::vector<StateVector> bra) {
    return sector_two_quanta_amplitude(v, tg.initial_level, tg.final_level, phi, k, w(k), bra, t, eta);
  };
  out.a2 = amp(2, {x, y});
  out.placements = {amp(3, {x, y, phi}), amp(3, {x, phi, y}), amp(3, {phi, x, y})};
  out.a3 = out.placements[0];
  double spread = 0.0;
  for (const auto& pl : out.placements) spread = std::max(spread, relative_difference(pl, out.a3));
  out.report.require_at_most("c_3^-2 A_3 = c_2^-2 A_2 (relative)",
                             relative_difference(out.a3 / w.sq(3), out.a2 / w.sq(2)), tol);
  out.report.require_at_most("spectator placements agree (relative)", spread, tol);
  return out;
}

/// 2 sum_n n(n-1)/2 c_n^4 p_n.
inline double two_photon_factor(const std::vector<double>& p, const ExtensionWeights& w) {
  double s = 0.0;
  for (double q : p) {
    if (q < 0.0) throw std::invalid_argument("two_photon_factor: p_n must be >= 0");
    s += q;
  }
  if (p.empty() || std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("two_photon_factor: sum p_n must be 1");
  if (w.max_sector() < static_cast<int>(p.size())) throw std::invalid_argument("two_photon_factor: fewer weights than p_n");
  double f = 0.0;
  for (int n = 1; n <= static_cast<int>(p.size()); ++n) {
    f += 2.0 * (n * (n - 1) / 2.0) * w.sq(n) * w.sq(n) * p[static_cast<std::size_t>(n - 1)];
  }
  return f;
}

/// factor * |phi_1|^2 |phi_2|^2 * p_old.
inline double two_photon_probability(const std::vector<double>& p, const ExtensionWeights& w, cplx phi1, cplx phi2,
                                     double p_old) {
  return two_photon_factor(p, w) * std::norm(phi1) * std::norm(phi2) * p_old;
}

/// CSV rows: label, Re, Im, |.|^2.
inline std::string amplitude_csv(const std::vector<std::pair<std::string, cplx>>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "channel,re,im,abs2\n";
  for (const auto& [label, v] : rows) os << label << ',' << v.real() << ',' << v.imag() << ',' << std::norm(v) << '\n';
  return os.str();
}

}  // namespace noncanon
