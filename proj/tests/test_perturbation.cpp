#include "noncanon/perturbation.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace noncanon;

namespace {

ModeSet three_modes(double volume = 2.0) {
  return ModeSet({make_mode(1, Vec3(1.0, 0.2, 0.0)), make_mode(-1, Vec3(0.0, 0.9, 0.5)),
                  make_mode(1, Vec3(-0.3, 0.4, 1.1))},
                 volume);
}

TwoLevelAtom tilted_atom(double omega0 = 1.0) {
  return TwoLevelAtom{omega0, 0.7, CVec3(cplx(0.6, 0.0), cplx(0.0, 0.48), cplx(0.64, 0.0))};
}

/// -i/hbar int_0^t H(t') dt' psi by composite Simpson.
template <class H>
StateVector simpson_first_order(H&& h_of_t, const StateVector& psi, double t, int intervals = 2000) {
  StateVector acc = StateVector::Zero(psi.size());
  const double step = t / intervals;
  for (int i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * (h_of_t(i * step) * psi);
  }
  return -I * (step / 3.0) * acc;
}

}  // namespace

TEST(Coupling, OrthogonalDipoleDecouples) {
  ModeSet ms({make_mode(1, Vec3(0, 0, 1)), make_mode(-1, Vec3(0, 0, 2))}, 1.0);
  const TwoLevelAtom atom{1.0, 1.0, CVec3(0, 0, 1)};
  EXPECT_EQ(coupling(ms, 0, atom), cplx(0.0));
  EXPECT_EQ(coupling(ms, 1, atom), cplx(0.0));
}

TEST(Coupling, SquaredMagnitudeScalesAsInverseOmegaVolume) {
  const TwoLevelAtom atom = tilted_atom();
  const ModeSet a({make_mode(1, Vec3(0.3, 0.4, 0.0))}, 2.0);
  const ModeSet b({make_mode(1, Vec3(0.9, 1.2, 0.0))}, 2.0);
  const ModeSet c({make_mode(1, Vec3(0.3, 0.4, 0.0))}, 5.0);
  EXPECT_NEAR(std::norm(coupling(a, 0, atom)) / std::norm(coupling(b, 0, atom)), 3.0, 1e-13);
  EXPECT_NEAR(std::norm(coupling(a, 0, atom)) / std::norm(coupling(c, 0, atom)), 2.5, 1e-13);
  EXPECT_THROW(coupling(a, 0, TwoLevelAtom{1.0, 1.0, CVec3(1, 1, 0)}) + cplx(0), std::exception)
      << "unnormalized u must be rejected by validate";
}

TEST(Rwa, InteractionIsHermitian) {
  const OscillatorSpace sp(three_modes(), 3);
  const TwoLevelAtom atom = tilted_atom();
  for (double t : {0.0, 0.37, 4.1}) EXPECT_TRUE(is_hermitian(rwa_interaction(atom, sp, t), 1e-14));
  const MultiSpace ms(OscillatorSpace(three_modes(), 1), 3);
  const auto h = rwa_interaction(atom, ms, ExtensionWeights::inverse_sqrt(3), 1.3);
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(is_hermitian(h.block(k), 1e-14));
}

TEST(FirstOrder, MatchesQuadratureOfInteraction) {
  const OscillatorSpace sp(three_modes(), 3);
  const TwoLevelAtom atom = tilted_atom(1.05);
  StateVector field = StateVector::Zero(sp.dim());
  field(sp.flat(0, 0)) = cplx(0.5, 0.1);
  field(sp.flat(1, 1)) = cplx(0.0, 0.6);
  field(sp.flat(2, 2)) = cplx(-0.4, 0.3);
  field.normalize();
  const StateVector psi0 = excited_initial_state(sp, field);
  const double t = 2.3;
  const StateVector analytic = first_order_state(atom, sp, psi0, t) - psi0;
  const StateVector quad = simpson_first_order([&](double s) { return rwa_interaction(atom, sp, s); }, psi0, t);
  EXPECT_LT((analytic - quad).norm(), 1e-10 * quad.norm());
}

TEST(FirstOrder, ResonantLimitAndStimulatedFactor) {
  ModeSet ms({make_mode(1, Vec3(0.6, 0.8, 0.0))}, 1.0);
  const OscillatorSpace sp(ms, 2);
  const TwoLevelAtom atom = tilted_atom(1.0);
  const double t = 3.0;
  const cplx g = coupling(ms, 0, atom);
  const StateVector out0 = first_order_state(atom, sp, excited_initial_state(sp, sp.basis_state(0, 0)), t);
  EXPECT_LT(std::abs(out0(2 * sp.flat(0, 1)) - (-I * t) * atom.omega0 * atom.d * std::conj(g)), 1e-14);
  const StateVector out1 = first_order_state(atom, sp, excited_initial_state(sp, sp.basis_state(0, 1)), t);
  EXPECT_NEAR(std::abs(out1(2 * sp.flat(0, 2))) / std::abs(out0(2 * sp.flat(0, 1))), std::sqrt(2.0), 1e-14);
}

TEST(FirstOrder, SmallTimeSeries) {
  const ModeSet ms({make_mode(-1, Vec3(0.0, 1.4, 0.3))}, 1.0);
  const OscillatorSpace sp(ms, 1);
  const TwoLevelAtom atom = tilted_atom(1.0);
  const cplx g = coupling(ms, 0, atom);
  const double delta = atom.omega0 - ms[0].omega;
  for (double t : {1e-2, 1e-3}) {
    const StateVector out = first_order_state(atom, sp, excited_initial_state(sp, sp.basis_state(0, 0)), t);
    const cplx series = atom.omega0 * atom.d * std::conj(g) * (-I * t - delta * t * t / 2.0);
    EXPECT_LT(std::abs(out(0 + 2 * sp.flat(0, 1)) - series), std::abs(series) * t * t);
  }
}

TEST(FirstOrder, OffResonantProbabilityGrowsQuadratically) {
  const ModeSet ms({make_mode(1, Vec3(0.0, 2.0, 0.0))}, 1.0);
  const OscillatorSpace sp(ms, 1);
  const TwoLevelAtom atom = tilted_atom(1.0);
  const StateVector psi0 = excited_initial_state(sp, sp.basis_state(0, 0));
  auto prob = [&](double t) { return std::norm(first_order_state(atom, sp, psi0, t)(2 * sp.flat(0, 1))); };
  EXPECT_NEAR(std::log(prob(0.02) / prob(0.01)) / std::log(2.0), 2.0, 1e-3);
  EXPECT_LT(prob(0.05), 1.0);
}

TEST(FirstOrder, RejectsUnsupportedInitialStates) {
  const OscillatorSpace sp(three_modes(), 2);
  const TwoLevelAtom atom = tilted_atom();
  StateVector s = StateVector::Zero(2 * sp.dim());
  s(0) = 1.0;  // ground atom
  EXPECT_THROW(first_order_state(atom, sp, s, 1.0), std::invalid_argument);
  EXPECT_THROW(first_order_state(atom, sp, excited_initial_state(sp, sp.basis_state(1, 2)), 1.0),
               std::invalid_argument);
  EXPECT_THROW(first_order_state(atom, sp, StateVector::Zero(3), 1.0), std::invalid_argument);
}

TEST(DeltaT, PeakAndNormalization) {
  EXPECT_NEAR(delta_T(0.0, 40.0), 40.0 / (2 * pi), 1e-14);
  EXPECT_NEAR(delta_T(0.0, 40.0, 2.0), 40.0 / (4 * pi), 1e-14);
  EXPECT_NEAR(delta_T(1e-9, 40.0), 40.0 / (2 * pi), 1e-9);
  double prev_err = 1.0;
  for (double t : {20.0, 80.0, 320.0}) {
    const int n = 400000;
    const double h = 40.0 / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) integral += ((i == 0 || i == n) ? 0.5 : 1.0) * delta_T(-20.0 + i * h, t) * h;
    const double err = std::abs(integral - 1.0);
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 1e-3);
}

TEST(EmissionRate, EqualsSummedFirstOrderProbabilityOverT) {
  const ModeSet ms = make_shell_modeset(2 * pi, 0.5, 2.5, 1.0);
  const OscillatorSpace sp(ms, 1);
  const TwoLevelAtom atom = tilted_atom(1.3);
  const double t = 7.0;
  auto profile = [](double w) { return std::exp(-(w - 1.2) * (w - 1.2)); };
  StateVector field = StateVector::Zero(sp.dim());
  for (std::size_t m = 0; m < ms.size(); ++m) field(sp.flat(m, 0)) = std::sqrt(profile(ms[m].omega));
  const StateVector out = first_order_state(atom, sp, excited_initial_state(sp, field), t);
  double total = 0.0;
  for (std::size_t m = 0; m < ms.size(); ++m) total += std::norm(out(2 * sp.flat(m, 1)));
  const auto r = emission_rate(atom, profile, ms, t);
  EXPECT_NEAR(r.p, total / t, 1e-12 * r.p);
  EXPECT_FALSE(r.resolved);
  EXPECT_FALSE(r.warning.empty());
}

TEST(EmissionRate, RatioFollowsProfileOnDenseShell) {
  const ModeSet ms = make_shell_modeset(40 * pi, 0.85, 1.15, 1.0);
  const TwoLevelAtom atom = tilted_atom(1.0);
  const double t = 250.0;
  const auto flat = emission_rate(atom, [](double) { return 1.0; }, ms, t);
  EXPECT_NEAR(flat.ratio, 1.0, 1e-14);
  EXPECT_TRUE(flat.resolved) << flat.warning;
  const auto gauss = emission_rate(atom, [](double w) { return std::exp(-(w - 1.0) * (w - 1.0) / (2 * 0.01)); }, ms, t);
  EXPECT_NEAR(gauss.ratio, 1.0, 0.02);
  const auto quarter = emission_rate(atom, [](double w) { return 0.25 + 1.5 * (w - 1.0); }, ms, t);
  EXPECT_NEAR(quarter.ratio, 0.25, 0.02 * 0.25);
  // golden-rule regime: the rate is stable as T doubles
  const auto longer = emission_rate(atom, [](double) { return 1.0; }, ms, 2 * t);
  EXPECT_NEAR(longer.p_old / flat.p_old, 1.0, 0.05);
}

TEST(EmissionRate, Validation) {
  ModeSet ms({make_mode(1, Vec3(0, 0, 1))}, 1.0);
  EXPECT_THROW(emission_rate(TwoLevelAtom{1.0, 1.0, CVec3(0, 0, 1)}, [](double) { return 1.0; }, ms, 10.0),
               std::domain_error);
  EXPECT_THROW(emission_rate(tilted_atom(), [](double) { return -1.0; }, ms, 10.0), std::invalid_argument);
  EXPECT_THROW(emission_rate(tilted_atom(), [](double) { return 1.0; }, ms, 0.0), std::invalid_argument);
}

TEST(MultiFirstOrder, MatchesQuadratureInEverySector) {
  const OscillatorSpace sp(three_modes(), 1);
  const MultiSpace ms(sp, 3);
  const TwoLevelAtom atom = tilted_atom(1.1);
  const VacuumSpec v{{cplx(0.6, 0.0), cplx(0.0, 0.64), cplx(0.48, 0.0)}, {0.2, 0.5, 0.3}};
  const auto w = ExtensionWeights::explicit_values({1.0, 0.8, 0.45});
  const double t = 1.7;
  const auto res = multi_first_order(atom, ms, v, w, t);
  const MultiState vac = vacuum_state(ms, v);
  for (int k = 1; k <= 3; ++k) {
    const auto& basis = ms.sector(k);
    StateVector init = StateVector::Zero(2 * basis.dim());
    for (Index i = 0; i < basis.dim(); ++i) init(2 * i + 1) = vac.sectors[std::size_t(k - 1)](i);
    const StateVector quad =
        simpson_first_order([&](double s) { return rwa_interaction(atom, ms, w, s).block(k); }, init, t);
    EXPECT_LT((res.sectors[std::size_t(k - 1)] - init - quad).norm(), 1e-10 * std::max(1e-30, quad.norm()));
  }
}

TEST(MultiFirstOrder, RateFactor) {
  const OscillatorSpace sp(three_modes(), 1);
  const MultiSpace ms(sp, 3);
  const TwoLevelAtom atom = tilted_atom();
  const std::vector<cplx> phi{cplx(0.6, 0.0), cplx(0.0, 0.64), cplx(0.48, 0.0)};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> p{u(rng), u(rng), u(rng)};
    const double s = p[0] + p[1] + p[2];
    for (auto& q : p) q /= s;
    EXPECT_NEAR(multi_first_order(atom, ms, VacuumSpec{phi, p}, ExtensionWeights::inverse_sqrt(3), 1.0).rate_factor,
                1.0, 1e-15);
  }
  EXPECT_EQ(multi_first_order(atom, ms, VacuumSpec{phi, {0.0, 1.0}}, ExtensionWeights::ones(3), 1.0).rate_factor,
            2.0);
  EXPECT_THROW(multi_first_order(atom, MultiSpace(sp, 2), VacuumSpec{phi, {0.0, 0.0, 1.0}},
                                 ExtensionWeights::ones(3), 1.0),
               std::invalid_argument);
}

TEST(MultiFirstOrder, OnePlacementPerOscillatorSlot) {
  const OscillatorSpace sp(three_modes(), 1);
  const MultiSpace ms(sp, 3);
  const TwoLevelAtom atom = tilted_atom();
  const VacuumSpec v{{cplx(0.6, 0.0), cplx(0.0, 0.64), cplx(0.48, 0.0)}, {0.0, 0.0, 1.0}};
  const auto res = multi_first_order(atom, ms, v, ExtensionWeights::inverse_sqrt(3), 2.0);
  const StateVector corr = ground_atom_part(res.sectors[2]);
  const StateVector phi = ground_profile(sp, v.phi);
  const StateVector x = excited_slot(sp, 0);
  std::vector<cplx> placements;
  for (int slot = 0; slot < 3; ++slot) {
    std::vector<StateVector> bra(3, phi);
    bra[std::size_t(slot)] = x;
    placements.push_back(product_bra_amplitude(ms.sector(3), bra, corr));
  }
  EXPECT_EQ(placements.size(), 3u);
  for (const auto& a : placements) EXPECT_LT(std::abs(a - placements[0]), 1e-15);
  EXPECT_GT(std::abs(placements[0]), 1e-3);
  const double c3 = 1.0 / std::sqrt(3.0);
  const cplx single = atom.omega0 * atom.d * std::conj(coupling(sp.modes(), 0, atom)) *
                      emission_quotient(atom.omega0 - sp.modes()[0].omega, 2.0) * v.phi[0];
  EXPECT_LT(std::abs(placements[0] - c3 * single), 1e-14);
}

// ---------------------------------------------------------------------------

namespace {

/// Canonical Fock space: atom levels (x) occupation 0..2 per mode, dense.
cplx canonical_fock_amplitude(const ModeSet& ms, const MultiLevelAtom& atom, const TwoQuantaTargets& tg, double t,
                              double eta) {
  const int nm = int(ms.size()), levels = 3, la = atom.levels();
  Index dim = la;
  for (int m = 0; m < nm; ++m) dim *= levels;
  auto index = [&](int level, const std::vector<int>& n) {
    Index i = level;
    for (int m = 0; m < nm; ++m) i = i * levels + n[std::size_t(m)];
    return i;
  };
  auto decode = [&](Index i, int& level, std::vector<int>& n) {
    n.assign(std::size_t(nm), 0);
    for (int m = nm - 1; m >= 0; --m) {
      n[std::size_t(m)] = int(i % levels);
      i /= levels;
    }
    level = int(i);
  };
  DenseOp v = DenseOp::Zero(dim, dim);
  Eigen::VectorXd energy(dim);
  for (Index col = 0; col < dim; ++col) {
    int level;
    std::vector<int> n;
    decode(col, level, n);
    energy(col) = atom.energies[std::size_t(level)];
    for (int m = 0; m < nm; ++m) energy(col) += ms[std::size_t(m)].omega * (n[std::size_t(m)] + 0.5);
    for (int m = 0; m < nm; ++m) {
      const double wgt = std::sqrt(1.0 / (2.0 * ms[std::size_t(m)].omega * ms.volume()));
      const CVec3 e = polarization(ms[std::size_t(m)]);
      for (int lp = 0; lp < la; ++lp) {
        const CVec3 pe = atom.p_elem(lp, level);
        if (n[std::size_t(m)] + 1 < levels) {
          auto up = n;
          up[std::size_t(m)] += 1;
          v(index(lp, up), col) += -wgt * std::sqrt(double(n[std::size_t(m)] + 1)) * bdot(e.conjugate(), pe);
        }
        if (n[std::size_t(m)] > 0) {
          auto dn = n;
          dn[std::size_t(m)] -= 1;
          v(index(lp, dn), col) += -wgt * std::sqrt(double(n[std::size_t(m)])) * bdot(e, pe);
        }
      }
    }
  }
  std::vector<int> zero(std::size_t(nm), 0), fin(std::size_t(nm), 0);
  fin[tg.mode1] = 1;
  fin[tg.mode2] = 1;
  const Index i0 = index(tg.initial_level, zero), f = index(tg.final_level, fin);
  cplx sum = 0.0;
  for (Index mid = 0; mid < dim; ++mid)
    sum += v(f, mid) * v(mid, i0) / cplx(energy(i0) - energy(mid), eta);
  return -2.0 * pi * I * sum * delta_T(energy(i0) - energy(f), t);
}

struct TwoQuantaFixture {
  ModeSet modes = three_modes(3.0);
  OscillatorSpace space{modes, 1};
  MultiLevelAtom atom = fixture_atom("three-level");
  VacuumSpec vac{{cplx(0.6, 0.0), cplx(0.0, 0.64), cplx(0.48, 0.0)}, {0.2, 0.5, 0.3}};
  TwoQuantaTargets targets{0, 1, 2, 0};
  double t = 9.0;
};

}  // namespace

TEST(TwoQuanta, FixturesAreHermitian) {
  for (const char* id : {"three-level", "four-level", "dark"}) EXPECT_NO_THROW(fixture_atom(id));
  EXPECT_THROW(fixture_atom("missing"), std::invalid_argument);
  MultiLevelAtom bad = fixture_atom("three-level");
  bad.p[0](0, 1) += cplx(0.0, 0.1);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(TwoQuanta, OracleMatchesCanonicalFockComputation) {
  TwoQuantaFixture fx;
  for (const char* id : {"three-level", "four-level"}) {
    const auto atom = fixture_atom(id);
    const TwoQuantaTargets tg{0, 1, atom.levels() - 1, 0};
    const ModeSet two = fx.modes.prefix(2);
    const cplx closed = standard_oracle_two_photon(two, atom, tg, fx.t);
    const cplx fock = canonical_fock_amplitude(two, atom, tg, fx.t, 1e-6);
    EXPECT_LT(relative_difference(closed, fock), 1e-12) << id;
    EXPECT_GT(std::abs(closed), 1e-6);
  }
}

TEST(TwoQuanta, ModifiedIsScaledOracle) {
  TwoQuantaFixture fx;
  const DipoleCoupling v(fx.space, fx.atom);
  for (const auto& w : {ExtensionWeights::inverse_sqrt(3), ExtensionWeights::explicit_values({1.0, 0.7, 1.4})}) {
    for (const auto& tg : {TwoQuantaTargets{0, 1, 2, 0}, TwoQuantaTargets{1, 2, 2, 0}, TwoQuantaTargets{0, 2, 2, 1}}) {
      const auto mod = second_order_two_quanta(v, fx.vac, w, 3, tg, fx.t);
      const cplx oracle = standard_oracle_two_photon(fx.modes, fx.atom, tg, fx.t);
      const cplx scale = w(2) * w(2) * std::sqrt(fx.vac.p[1]) * fx.vac.phi[tg.mode1] * fx.vac.phi[tg.mode2];
      EXPECT_LT(relative_difference(mod.value, scale * oracle), 1e-10);
      EXPECT_EQ(mod.sector, 2);
    }
  }
}

TEST(TwoQuanta, SwapSymmetry) {
  TwoQuantaFixture fx;
  const DipoleCoupling v(fx.space, fx.atom);
  const auto w = ExtensionWeights::inverse_sqrt(3);
  const auto a = second_order_two_quanta(v, fx.vac, w, 3, {0, 2, 2, 0}, fx.t);
  const auto b = second_order_two_quanta(v, fx.vac, w, 3, {2, 0, 2, 0}, fx.t);
  EXPECT_LT(relative_difference(a.value, b.value), 1e-12);
  EXPECT_LT(relative_difference(standard_oracle_two_photon(fx.modes, fx.atom, {0, 2, 2, 0}, fx.t),
                                standard_oracle_two_photon(fx.modes, fx.atom, {2, 0, 2, 0}, fx.t)),
            1e-14);
}

TEST(TwoQuanta, VanishingCases) {
  TwoQuantaFixture fx;
  const DipoleCoupling v(fx.space, fx.atom);
  const auto w = ExtensionWeights::inverse_sqrt(3);
  VacuumSpec no_pair = fx.vac;
  no_pair.p = {0.5, 0.0, 0.5};
  EXPECT_EQ(second_order_two_quanta(v, no_pair, w, 3, fx.targets, fx.t).value, cplx(0.0));

  const ModeSet along_z({make_mode(1, Vec3(0, 0, 1)), make_mode(-1, Vec3(0, 0, 1.7))}, 1.0);
  const auto dark = fixture_atom("dark");
  EXPECT_EQ(standard_oracle_two_photon(along_z, dark, {0, 1, 2, 0}, fx.t), cplx(0.0));
  const DipoleCoupling vd(OscillatorSpace(along_z, 1), dark);
  EXPECT_EQ(second_order_two_quanta(vd, VacuumSpec{{0.6, 0.8}, {0.0, 1.0}}, w, 3, {0, 1, 2, 0}, fx.t).value,
            cplx(0.0));
  EXPECT_THROW(second_order_two_quanta(v, fx.vac, w, 3, {1, 1, 2, 0}, fx.t), std::invalid_argument);
  EXPECT_THROW(second_order_two_quanta(v, fx.vac, w, 2, fx.targets, fx.t), std::invalid_argument);
}

TEST(TwoQuanta, AtMostTwoQuantaAtSecondOrder) {
  TwoQuantaFixture fx;
  const DipoleCoupling v(fx.space, fx.atom);
  const StateVector phi = ground_profile(fx.space, fx.vac.phi);
  const std::vector<StateVector> three{excited_slot(fx.space, 0), excited_slot(fx.space, 1), excited_slot(fx.space, 2)};
  EXPECT_EQ(sector_two_quanta_amplitude(v, 2, 0, phi, 3, 1.0 / std::sqrt(3.0), three, fx.t), cplx(0.0));
}

TEST(TwoQuanta, ThreeOscillatorIdentity) {
  TwoQuantaFixture fx;
  const DipoleCoupling v(fx.space, fx.atom);
  for (const auto& w : {ExtensionWeights::inverse_sqrt(3), ExtensionWeights::explicit_values({1.0, 0.7, 1.4})}) {
    const auto r = three_oscillator_identity_check(v, fx.vac, w, 3, fx.targets, fx.t);
    EXPECT_TRUE(r.report.all_passed()) << r.report.to_text();
    EXPECT_EQ(r.placements.size(), 3u);
    EXPECT_GT(std::abs(r.a3), 0.0);
  }
  VacuumSpec disjoint = fx.vac;
  disjoint.phi = {0.0, 0.0, 1.0};
  const auto r = three_oscillator_identity_check(v, disjoint, ExtensionWeights::inverse_sqrt(3), 3, fx.targets, fx.t);
  EXPECT_EQ(r.a3, cplx(0.0));
  EXPECT_EQ(r.a2, cplx(0.0));
}

TEST(TwoQuanta, EtaStability) {
  TwoQuantaFixture fx;
  const DipoleCoupling v(fx.space, fx.atom);
  const auto w = ExtensionWeights::inverse_sqrt(3);
  const cplx ref = second_order_two_quanta(v, fx.vac, w, 3, fx.targets, fx.t, 1e-6).value;
  for (double eta : {1e-7, 1e-5})
    EXPECT_LT(relative_difference(second_order_two_quanta(v, fx.vac, w, 3, fx.targets, fx.t, eta).value, ref), 0.01);
}

TEST(TwoQuanta, ResonantDenominatorNeedsFlag) {
  const ModeSet ms({make_mode(1, Vec3(1.8, 0, 0)), make_mode(-1, Vec3(0, 0.9, 0))}, 1.0);
  MultiLevelAtom atom = fixture_atom("three-level");  // E_2 - E_1 = 1.8
  const TwoQuantaTargets tg{0, 1, 2, 0};
  EXPECT_THROW(standard_oracle_two_photon(ms, atom, tg, 5.0), std::domain_error);
  EXPECT_NO_THROW(standard_oracle_two_photon(ms, atom, tg, 5.0, 1e-6, true));
  const DipoleCoupling v(OscillatorSpace(ms, 1), atom);
  const VacuumSpec vac{{0.6, 0.8}, {0.0, 1.0}};
  EXPECT_THROW(second_order_two_quanta(v, vac, ExtensionWeights::inverse_sqrt(2), 2, tg, 5.0), std::domain_error);
  EXPECT_NO_THROW(second_order_two_quanta(v, vac, ExtensionWeights::inverse_sqrt(2), 2, tg, 5.0, 1e-6, true));
}

TEST(TwoPhotonProbability, Factors) {
  const auto w = ExtensionWeights::inverse_sqrt(3);
  EXPECT_EQ(two_photon_factor({1.0}, w), 0.0);
  EXPECT_EQ(two_photon_factor({0.0, 1.0}, w), 0.5);
  EXPECT_NEAR(two_photon_factor({0.5, 0.3, 0.2}, w), 1.0 - (0.5 + 0.15 + 0.2 / 3.0), 1e-15);
  EXPECT_NEAR(two_photon_factor({0.5, 0.3, 0.2}, w), 0.283333333333333, 1e-12);
  EXPECT_NEAR(two_photon_probability({0.0, 1.0}, w, 0.6, cplx(0.0, 0.8), 2.0), 0.5 * 0.36 * 0.64 * 2.0, 1e-15);
  EXPECT_EQ(two_photon_factor({0.0, 1.0}, ExtensionWeights::ones(2)), 2.0);
  EXPECT_THROW(two_photon_factor({0.5, 0.6}, w), std::invalid_argument);
  EXPECT_THROW(two_photon_factor({1.2, -0.2}, w), std::invalid_argument);
}

TEST(TwoPhotonProbability, InverseSqrtIdentityOnRandomDistributions) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + int(u(rng) * 6);
    std::vector<double> p(static_cast<std::size_t>(n));
    double s = 0.0;
    for (auto& q : p) s += (q = u(rng));
    for (auto& q : p) q /= s;
    double direct = 1.0;
    for (int k = 1; k <= n; ++k) direct -= p[std::size_t(k - 1)] / k;
    EXPECT_NEAR(two_photon_factor(p, ExtensionWeights::inverse_sqrt(n)), direct, 1e-14);
  }
}

TEST(AmplitudeCsv, Columns) {
  const std::string csv = amplitude_csv({{"a", cplx(1.0, -2.0)}});
  EXPECT_EQ(csv, "channel,re,im,abs2\na,1,-2,5\n");
}
