#include "noncanon/fields.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace noncanon;

namespace {

OscillatorSpace small_space(int n_max) {
  ModeSet ms({make_mode(1, Vec3(1, 0, 0)), make_mode(-1, Vec3(0, 1, 1)), make_mode(1, Vec3(-1, 2, 0.5))}, 3.0);
  return OscillatorSpace(ms, n_max);
}

FieldPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), Vec3(u(rng), u(rng), u(rng))};
}

/// e^{-|a|^2/2} a^n / sqrt(n!) without renormalization.
StateVector poisson_coherent(cplx alpha, int n_max) {
  StateVector v(n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    v(n) = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(std::tgamma(n + 1.0));
  return v;
}

}  // namespace

TEST(Fields, OperatorsAreHermitian) {
  const auto sp = small_space(3);
  std::mt19937_64 rng(3);
  const FieldPoint p = random_point(rng);
  for (auto kind : {FieldKind::A, FieldKind::E, FieldKind::B})
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(is_hermitian(field_operator(sp, kind, j, p), 1e-15));
  EXPECT_THROW(field_operator(sp, FieldKind::A, 3), std::invalid_argument);
}

TEST(Fields, TranslationGeneratesSpacetimeDependence) {
  const auto sp = small_space(3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const FieldPoint p = random_point(rng);
    for (auto kind : {FieldKind::A, FieldKind::E, FieldKind::B})
      for (int j = 0; j < 3; ++j) {
        const DenseOp moved = translate(sp, field_operator(sp, kind, j), p);
        EXPECT_LT(max_abs(DenseOp(moved - DenseOp(field_operator(sp, kind, j, p)))), 1e-11);
      }
  }
}

TEST(Fields, MagneticIsDirectionCrossElectricPerMode) {
  ModeSet ms({make_mode(1, Vec3(0.3, -1, 0.7))}, 1.0);
  const OscillatorSpace sp(ms, 2);
  const Vec3 n = ms[0].direction();
  const auto e = field_vector(sp, FieldKind::E);
  const auto b = field_vector(sp, FieldKind::B);
  for (int j = 0; j < 3; ++j) {
    const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
    const SparseOp nxe = n(j1) * e[std::size_t(j2)] - n(j2) * e[std::size_t(j1)];
    EXPECT_LT(max_abs(SparseOp(nxe - b[std::size_t(j)])), 1e-15);
  }
}

TEST(Coherent, StateIsNormalizedAndGuardsTail) {
  const StateVector v = coherent_state(cplx(0.6, 0.8), 20);
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_LT((v - poisson_coherent(cplx(0.6, 0.8), 20)).norm(), 1e-12);
  EXPECT_THROW(coherent_state(1.0, 12), std::domain_error);
  EXPECT_NO_THROW(coherent_state(1.0, 18));
  EXPECT_LT(coherent_tail_bound(1.0, 18), 1e-8);
}

TEST(Coherent, LadderEigenvalueUpToTail) {
  const cplx alpha(0.3, -0.9);
  const StateVector v = coherent_state(alpha, 20);
  const StateVector av = DenseOp(ladder(20)) * v;
  // only the top coefficient breaks the eigen-relation: |alpha| |alpha|^N / sqrt(N!)
  EXPECT_LE((av - alpha * v).norm(), std::abs(alpha) * coherent_tail_bound(alpha, 19) * (1 + 1e-9));
}

TEST(Coherent, FieldAveragesMatchExplicitState) {
  const auto sp = small_space(20);
  const CoherentFieldSpec spec{{cplx(0.6, 0.0), cplx(0.0, 0.48), cplx(0.64, 0.0)},
                               {cplx(0.5, 0.5), cplx(-0.9, 0.1), cplx(0.0, 1.0)}};
  StateVector psi = StateVector::Zero(sp.dim());
  for (std::size_t m = 0; m < 3; ++m) psi.segment(sp.flat(m, 0), 21) = spec.phi[m] * poisson_coherent(spec.alpha[m], 20);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    const FieldPoint p = random_point(rng);
    for (auto kind : {FieldKind::A, FieldKind::E, FieldKind::B}) {
      const CVec3 closed = coherent_field_average(sp, spec, kind, p);
      for (int j = 0; j < 3; ++j) {
        const cplx direct = expectation(psi, field_operator(sp, kind, j, p));
        EXPECT_LT(std::abs(direct - closed(j)), 1e-9);
        EXPECT_LT(std::abs(closed(j).imag()), 1e-14);
      }
    }
  }
  EXPECT_NEAR(coherent_energy(sp, spec), expectation(psi, hamiltonian(sp)).real(), 1e-9);
  EXPECT_LT((coherent_state_vector(sp, spec) - psi).norm(), 1e-9);
}

TEST(Coherent, ElectricAverageHasCosineShape) {
  ModeSet ms({make_mode(1, Vec3(0, 0, 1))}, 1.0);
  const OscillatorSpace sp(ms, 20);
  const CoherentFieldSpec spec{{1.0}, {0.7}};
  const double w = std::sqrt(1.0 / 2.0);
  for (double t : {0.0, 0.4, 1.3}) {
    const CVec3 e = coherent_field_average(sp, spec, FieldKind::E, {t, Vec3::Zero()});
    // e_+ = (x + i y)/sqrt2 on the z axis; 2 Re(i w 0.7 e^{-it} e_+)
    EXPECT_NEAR(e(0).real(), 2.0 * w * 0.7 * std::sin(t) / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(e(1).real(), -2.0 * w * 0.7 * std::cos(t) / std::sqrt(2.0), 1e-14);
  }
}

TEST(Coherent, SpecValidation) {
  const auto sp = small_space(20);
  EXPECT_THROW(coherent_energy(sp, CoherentFieldSpec{{1.0}, {0.0}}), std::invalid_argument);
  EXPECT_THROW(coherent_energy(sp, CoherentFieldSpec{{1.0, 1.0, 0.0}, {0.0, 0.0, 0.0}}), std::invalid_argument);
  const auto tiny = small_space(4);
  EXPECT_THROW(coherent_field_average(tiny, CoherentFieldSpec{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}, FieldKind::A, {}),
               std::domain_error);
}

TEST(EnergyMomentum, IdentitiesHoldOnValidSubspace) {
  const auto sp = small_space(3);
  std::mt19937_64 rng(21);
  std::vector<FieldPoint> pts{random_point(rng), random_point(rng), random_point(rng)};
  const auto r = energy_momentum_identity_check(sp, pts);
  EXPECT_TRUE(r.all_passed()) << r.to_text();
  EXPECT_THROW(energy_momentum_identity_check(sp, std::span(pts).first(2)), std::invalid_argument);
}

TEST(EnergyMomentum, MomentumScalesWithLightSpeed) {
  ModeSet ms({make_mode(1, Vec3(1, 0, 0)), make_mode(-1, Vec3(0, 1, 1))}, 2.0, Constants{1.0, 2.5, 1.0});
  const OscillatorSpace sp(ms, 2);
  std::vector<FieldPoint> pts{{0.1, Vec3(0.2, 0, 0)}, {0.3, Vec3(0, 1, 0)}, {-1, Vec3(0, 0, 2)}};
  EXPECT_TRUE(energy_momentum_identity_check(sp, pts).all_passed());
}

TEST(EnergyMomentum, ElectricMagneticCommutatorClosedForm) {
  const auto sp = small_space(3);
  const FieldPoint p{0.4, Vec3(0.1, -0.3, 0.8)};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto c = eb_commutator(sp, a, b, p);
      EXPECT_LT(c.deviation, 1e-11);
    }
}

TEST(EnergyMomentum, SingleModeCommutatorByHand) {
  ModeSet ms({make_mode(-1, Vec3(0, 0, 2))}, 4.0);
  const OscillatorSpace sp(ms, 3);
  const auto c = eb_commutator(sp, 0, 0);
  // i hbar omega s / (2V) with omega = 2, s = -1, V = 4, projector factor 1
  EXPECT_NEAR(DenseOp(c.matrix)(0, 0).imag(), -0.25, 1e-14);
  EXPECT_EQ(max_abs(eb_commutator(sp, 2, 0).closed_form), 0.0);
}

TEST(FieldCsv, OneRowPerPoint) {
  std::vector<FieldPoint> pts{{0.0, Vec3::Zero()}, {1.0, Vec3(1, 2, 3)}};
  std::vector<CVec3> vals{CVec3::Zero(), CVec3::Ones()};
  const std::string csv = field_average_csv(pts, vals);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("t,x,y,z,re_x", 0), 0u);
}
