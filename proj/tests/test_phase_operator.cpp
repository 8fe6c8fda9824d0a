#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "regphase/phase_operator.hpp"
#include "test_util.hpp"

using namespace regphase;

namespace {

BoundReport vacuum_report(TruncatedSpace sp, const PhaseParams& p) {
  return norm_bound_report(FockState::number(sp, 0), p);
}

}  // namespace

TEST(Budget, FixedAndTarget) {
  const TruncatedSpace sp(64);
  const PhaseParams p(1.0, 0.0);
  const auto rep = vacuum_report(sp, p);
  const auto b = SeriesBudget::fixed(40, rep, sp);
  EXPECT_EQ(b.K, 40u);
  EXPECT_EQ(b.tail_bound, rep.series_tail(40));
  EXPECT_FALSE(b.complete_on_space);
  EXPECT_THROW(SeriesBudget::fixed(0, rep, sp), DomainError);
  EXPECT_THROW(SeriesBudget::fixed(64, rep, sp), DimensionError);

  // a loose target is met early and the K found is minimal
  const double target = rep.series_tail(10) * (1.0 + 1e-9);
  const auto loose = SeriesBudget::for_target(target, rep, sp);
  EXPECT_EQ(loose.K, 10u);
  EXPECT_LT(loose.tail_bound, target);
  EXPECT_GE(rep.series_tail(9), target);

  // an unreachable target falls back to the complete series on the space
  const auto tight = SeriesBudget::for_target(1e-8, rep, sp);
  EXPECT_EQ(tight.K, 63u);
  EXPECT_TRUE(tight.complete_on_space);
  EXPECT_THROW(SeriesBudget::for_target(0.0, rep, sp), DomainError);
}

TEST(PhiOperator, MatrixElementExamples) {
  const PhaseParams p(1.0, 0.0);
  EXPECT_EQ(phi_matrix_element(7, 7, p), Complex(kPi));
  const Complex e01 = phi_matrix_element(0, 1, p);
  EXPECT_NEAR(e01.real(), 0.0, 1e-16);
  EXPECT_NEAR(e01.imag(), 1.0 / std::sqrt(2.0), 1e-15);
  const PhaseParams q(2.3, 0.7);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t s = 0; s < 10; ++s)
      EXPECT_NEAR(std::abs(phi_matrix_element(r, s, q) - std::conj(phi_matrix_element(s, r, q))), 0.0, 1e-15);
}

TEST(PhiOperator, SeriesMatchesClosedForm) {
  struct Case {
    std::size_t m;
    double nu;
    std::size_t K;
  };
  for (const Case c : {Case{64, 1.0, 40}, Case{128, 2.5, 60}}) {
    const TruncatedSpace sp(c.m);
    const PhaseParams p(c.nu, 0.4);
    const auto b = SeriesBudget::fixed(c.K, vacuum_report(sp, p), sp);
    const auto series = make_Phi_series(sp, p, b);
    const auto closed = phi_closed_form(sp, p);
    EXPECT_LE(max_abs_diff(series, closed, sp.size()), b.tail_bound + 1e-12);
    EXPECT_EQ(hermiticity_defect(series.matrix()), 0.0);
    for (Eigen::Index r = 0; r < sp.size(); ++r) EXPECT_EQ(series(r, r), Complex(p.phi0() + kPi));
    // complete series on the space reproduces every element
    const auto full = make_Phi_series(sp, p, SeriesBudget::fixed(c.m - 1, vacuum_report(sp, p), sp));
    EXPECT_LE(max_abs_diff(full, closed, sp.size()), 1e-12);
  }
}

TEST(PhiOperator, TruncationDifferencesShrink) {
  const TruncatedSpace sp(128);
  const PhaseParams p(1.0, 0.0);
  const auto rep = vacuum_report(sp, p);
  double prev = 1e300;
  for (std::size_t K : {4u, 8u, 16u, 32u}) {
    const auto a = make_Phi_series(sp, p, SeriesBudget::fixed(K, rep, sp));
    const auto b = make_Phi_series(sp, p, SeriesBudget::fixed(2 * K, rep, sp));
    const auto inner = static_cast<Eigen::Index>(128 - 2 * K);
    const double d = max_abs_diff(a, b, inner);
    EXPECT_LT(d, prev);
    EXPECT_LE(d, rep.series_tail(K));
    prev = d;
  }
}

TEST(PhiOperator, SpectrumInsideBaseInterval) {
  const TruncatedSpace sp(128);
  const PhaseParams p(1.0, 0.25);
  const auto b = SeriesBudget::for_target(1e-6, vacuum_report(sp, p), sp);
  Eigen::SelfAdjointEigenSolver<Matrix> es(make_Phi_series(sp, p, b).matrix(), Eigen::EigenvaluesOnly);
  EXPECT_GE(es.eigenvalues().minCoeff(), p.phi0() - 0.1);
  EXPECT_LE(es.eigenvalues().maxCoeff(), p.phi0() + kTwoPi + 0.1);
}

TEST(PhiOperator, Covariance) {
  const TruncatedSpace sp(32);
  const PhaseParams p(1.4, 0.3);
  const double chi = 0.9;
  const auto rep = vacuum_report(sp, p);
  const auto b = SeriesBudget::fixed(20, rep, sp);
  Vector ph(32);
  for (Eigen::Index n = 0; n < 32; ++n) ph(n) = std::polar(1.0, double(n) * chi);
  const Matrix u = ph.asDiagonal();
  const Matrix id = Matrix::Identity(32, 32);
  const Matrix lhs = u * (make_Phi_series(sp, p, b).matrix() - (p.phi0() + kPi) * id) * u.adjoint();
  const PhaseParams q = p.with_phi0(p.phi0() + chi);
  const Matrix rhs = make_Phi_series(sp, q, b).matrix() - (q.phi0() + kPi) * id;
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PhiOperator, NumberPhaseCommutator) {
  for (double nu : {0.3, 1.0, 2.5}) {
    const TruncatedSpace sp(48);
    const PhaseParams p(nu, 0.6);
    const auto b = SeriesBudget::fixed(30, vacuum_report(sp, p), sp);
    const auto c = make_number_phase_commutator(sp, p, b);
    EXPECT_LE(c.identity_residual, 1e-12);
    EXPECT_EQ(c.strong_convergence_regime, nu > 2.0);
    for (Eigen::Index r = 0; r < 48; ++r) EXPECT_NEAR(c.P_phi0(r, r).real(), 1.0 / kTwoPi, 1e-15);
    for (std::size_t r = 0; r < 10; ++r)
      for (std::size_t s = 0; s < 10; ++s)
        EXPECT_NEAR(std::abs(c.P_phi0(Eigen::Index(r), Eigen::Index(s)) - povm_matrix_element(r, s, nu, p.phi0())),
                    0.0, 1e-15);
  }
}

TEST(PhiOperator, DyadLimit) {
  const TruncatedSpace sp(16);
  const PhaseParams p(1e-9, 0.2);
  const auto P = povm_series(sp, p, 15, p.phi0());
  EXPECT_NEAR((kTwoPi * P.matrix()).cwiseAbs().minCoeff(), 1.0, 1e-7);
}

TEST(GarrisonWong, Elements) {
  EXPECT_EQ(gw_matrix_element(3, 3, GwBase::Shifted), Complex(kPi));
  EXPECT_EQ(gw_matrix_element(3, 3, GwBase::Symmetric), Complex(0.0));
  EXPECT_EQ(gw_matrix_element(0, 1, GwBase::Shifted), kI);
  EXPECT_EQ(gw_matrix_element(2, 0, GwBase::Symmetric), Complex(0.0, 0.5));
  EXPECT_EQ(gw_matrix_element(1, 0, GwBase::Symmetric), Complex(0.0, -1.0));
}

TEST(GarrisonWong, SmallNuLimitOfClosedForm) {
  const PhaseParams p(1e-6, 0.0);
  for (std::size_t r = 0; r < 30; ++r)
    for (std::size_t s = 0; s < 30; ++s)
      EXPECT_LE(std::abs(phi_matrix_element(r, s, p) - gw_matrix_element(r, s, GwBase::Shifted)), 1e-5);
}

TEST(Hilbert, Examples) {
  Vector zero = Vector::Zero(8);
  zero(0) = 1.0;
  EXPECT_EQ(hilbert_bilinear_check(zero, zero, 8).max_abs_T, 0.0);
  Vector plus = Vector::Zero(8);
  plus(0) = plus(1) = 1.0 / std::sqrt(2.0);
  const auto h = hilbert_bilinear_check(plus, plus, 8);
  EXPECT_TRUE(h.holds);
  EXPECT_LE(h.max_abs_T, kPi);
}

TEST(Hilbert, RandomPairs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector chi = test::random_vector(rng, 64, 64);
    const Vector psi = test::random_vector(rng, 64, 64);
    const auto h = hilbert_bilinear_check(chi, psi, 64);
    EXPECT_TRUE(h.holds);
    EXPECT_LE(h.max_abs_T, h.bound);
  }
}

TEST(Hilbert, MatchesMatrixForm) {
  std::mt19937_64 rng(9);
  const Vector chi = test::random_vector(rng, 20, 20);
  const Vector psi = test::random_vector(rng, 20, 20);
  Matrix t(20, 20);
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t s = 0; s < 20; ++s) t(Eigen::Index(r), Eigen::Index(s)) = gw_matrix_element(r, s, GwBase::Shifted);
  t.diagonal().setZero();
  double worst = 0.0;
  for (Eigen::Index r = 1; r <= 20; ++r) {
    worst = std::max(worst, std::abs(chi.head(r).dot(t.topLeftCorner(r, r) * psi.head(r))));
  }
  EXPECT_NEAR(hilbert_bilinear_check(chi, psi, 20).max_abs_T, worst, 1e-12);
}

TEST(Classical, SymmetryPointAndModes) {
  for (std::size_t n : {1u, 11u, 61u}) {
    EXPECT_NEAR(classical_phase({n, ClassicalMode::PartialSum}, kPi), kPi, 1e-13);
    EXPECT_NEAR(classical_phase({n, ClassicalMode::FejerMean}, kPi), kPi, 1e-13);
  }
  EXPECT_THROW(classical_phase({0, ClassicalMode::PartialSum}, 1.0), DomainError);
}

TEST(Classical, FejerIsMeanOfPartialSums) {
  for (double phi : {0.1, 1.3, 4.0}) {
    double mean = 0.0;
    for (std::size_t m = 1; m <= 17; ++m) mean += classical_phase({m, ClassicalMode::PartialSum}, phi);
    EXPECT_NEAR(classical_phase({17, ClassicalMode::FejerMean}, phi), mean / 17.0, 1e-13);
  }
}

TEST(Classical, GibbsAndFejerBounds) {
  const double over = gibbs_overshoot(61);
  EXPECT_GT(over, 0.0);
  // 2 Si(pi) - pi (about 8.9% of the jump) less the drift of the line over
  // the first lobe, which sits near pi/(n+1)
  const double si_pi = 1.851937051982466;
  EXPECT_NEAR(over + kPi / 62.0, 2.0 * si_pi - kPi, 2e-3);
  for (int j = 0; j <= 4000; ++j) {
    const double phi = -kTwoPi + 2.0 * kTwoPi * j / 4000.0;
    const double s = classical_phase({61, ClassicalMode::FejerMean}, phi);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, kTwoPi);
  }
  // at the jump the Fejer mean tends to the midpoint
  EXPECT_NEAR(classical_phase({2000, ClassicalMode::FejerMean}, 1e-7), kPi, 1e-3);
}

TEST(Classical, Sawtooth) {
  EXPECT_EQ(sawtooth(0.0), kPi);
  EXPECT_NEAR(sawtooth(1.0), 1.0, 1e-15);
  EXPECT_NEAR(sawtooth(-1.0), kTwoPi - 1.0, 1e-15);
}
