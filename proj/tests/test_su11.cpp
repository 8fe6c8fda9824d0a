#include <gtest/gtest.h>

#include <random>

#include "regphase/phase_operator.hpp"
#include "regphase/su11.hpp"

using namespace regphase;

TEST(DiskPoint, Validation) {
  EXPECT_THROW(DiskPoint(1.0, 0.0), DomainError);
  EXPECT_THROW(DiskPoint(-0.1, 0.0), DomainError);
  EXPECT_NEAR(DiskPoint(0.5, -kPi / 2).theta(), 1.5 * kPi, 1e-15);
  const auto p = DiskPoint::from_complex(Complex(0.0, 0.3));
  EXPECT_NEAR(p.rho(), 0.3, 1e-16);
  EXPECT_NEAR(p.theta(), kPi / 2, 1e-16);
}

TEST(PhaseState, VacuumAtOrigin) {
  const PhaseState s(TruncatedSpace(10), PhaseParams(1.3, 0.0), DiskPoint(0.0, 2.0));
  EXPECT_EQ(s.coeffs()(0), Complex(1.0));
  EXPECT_EQ(s.coeffs().tail(9).norm(), 0.0);
  EXPECT_EQ(s.tail_mass(), 0.0);
}

TEST(PhaseState, NegativeBinomialProbabilities) {
  const PhaseState s(TruncatedSpace(200), PhaseParams(1.0, 0.0), DiskPoint(std::sqrt(0.5), 0.4));
  for (Eigen::Index n = 0; n < 40; ++n) {
    EXPECT_NEAR(std::norm(s.coeffs()(n)), (n + 1.0) * 0.25 * std::pow(0.5, double(n)), 1e-15);
  }
  EXPECT_NEAR(s.coeffs().squaredNorm() + s.tail_mass(), 1.0, 1e-12);
}

TEST(PhaseState, RecurrenceAndNormalization) {
  for (double nu : {0.5, 1.0, 3.0}) {
    for (double rho : {0.2, 0.6, 0.9}) {
      const TruncatedSpace sp(96);
      const PhaseParams p(nu, 0.0);
      const DiskPoint pt(rho, 1.1);
      const PhaseState s(sp, p, pt);
      for (Eigen::Index n = 0; n + 1 < 96; ++n) {
        const double f = std::sqrt((n + 1.0) / (n + 1.0 + nu));
        EXPECT_LE(std::abs(s.coeffs()(n + 1) * f - pt.z() * s.coeffs()(n)), 1e-12);
      }
      EXPECT_NEAR(s.coeffs().squaredNorm() + s.tail_mass(), 1.0, 1e-12);
      // partial sums of (nu+1)_n/n! t^n against the closed form (1-t)^{-(nu+1)}
      const double t = rho * rho;
      double partial = 0.0;
      double term = 1.0;
      for (int n = 0; n < 96; ++n) {
        partial += term;
        term *= t * (nu + 1.0 + n) / (n + 1.0);
      }
      const double closed = std::pow(1.0 - t, -(nu + 1.0));
      EXPECT_NEAR((closed - partial) / closed, s.tail_mass(), 1e-10);
    }
  }
}

TEST(PhaseState, TailWarning) {
  EXPECT_FALSE(PhaseState(TruncatedSpace(128), PhaseParams(1.0, 0.0), DiskPoint(0.5, 0.0)).tail_warning());
  EXPECT_TRUE(PhaseState(TruncatedSpace(16), PhaseParams(1.0, 0.0), DiskPoint(0.95, 0.0)).tail_warning());
}

TEST(PhaseState, EigenResidual) {
  for (double nu : {0.5, 1.0, 3.0}) {
    for (double rho : {0.1, 0.5, 0.8}) {
      const PhaseState s(TruncatedSpace(128), PhaseParams(nu, 0.0), DiskPoint(rho, 0.7));
      const double top = std::abs(s.coeffs()(127));
      EXPECT_NEAR(s.eigen_residual(), rho * top, 1e-15);
    }
  }
}

TEST(NumberStats, ClosedFormsAgainstSums) {
  const auto s = number_stats(PhaseState(TruncatedSpace(128), PhaseParams(1.0, 0.0), DiskPoint(std::sqrt(0.5), 0.0)));
  EXPECT_NEAR(s.mean, 2.0, 1e-14);
  EXPECT_NEAR(s.variance, 4.0, 1e-13);
  EXPECT_NEAR(s.mandel_q, 1.0, 1e-14);
  EXPECT_LE(s.max_relative_discrepancy, 1e-9);
  const auto v = number_stats(PhaseState(TruncatedSpace(8), PhaseParams(2.0, 0.0), DiskPoint(0.0, 0.0)));
  EXPECT_EQ(v.mean, 0.0);
  EXPECT_EQ(v.variance, 0.0);
  for (double rho : {0.05, 0.3, 0.7}) {
    const auto q = number_stats(PhaseState(TruncatedSpace(160), PhaseParams(0.4, 0.0), DiskPoint(rho, 0.0)));
    EXPECT_GT(q.mandel_q, 0.0);
    EXPECT_LE(q.max_relative_discrepancy, 1e-9);
  }
  EXPECT_THROW(number_stats(PhaseState(TruncatedSpace(16), PhaseParams(1.0, 0.0), DiskPoint(0.9, 0.0))),
               TailMassError);
}

TEST(Su11, Generators) {
  const TruncatedSpace sp(32);
  const double nu = 1.6;
  const PhaseParams p(nu, 0.0);
  const auto g = make_su11_generators(sp, p);
  const double kappa = p.kappa();
  for (Eigen::Index n = 0; n < 32; ++n) EXPECT_NEAR(g.K0(n, n).real(), n + kappa, 1e-15);

  const Eigen::Index inner = 31;
  const auto N = make_number(sp);
  const RealVector n = RealVector::LinSpaced(32, 0.0, 31.0);
  EXPECT_LE(max_abs_diff(g.Kplus * g.Kminus, FockOperator::diagonal(sp, (n.array() + nu) * n.array()), 32), 1e-12);
  EXPECT_LE(max_abs_diff(commutator(g.K0, g.Kplus), g.Kplus, 32), 1e-12);
  EXPECT_LE(max_abs_diff(commutator(g.K0, g.Kminus), Complex(-1.0) * g.Kminus, 32), 1e-12);
  // [K-, K+] = 2 K0 from the definitions
  EXPECT_LE(max_abs_diff(commutator(g.Kminus, g.Kplus), Complex(2.0) * g.K0, inner), 1e-12);
  const auto [F, Fp] = make_F(sp, p);
  EXPECT_LE(max_abs_diff(commutator(F, g.Kplus), FockOperator::identity(sp), inner), 1e-12);
  EXPECT_LE(max_abs_diff(commutator(F, g.K0), F, 32), 1e-12);
  EXPECT_LE(max_abs_diff(commutator(F, g.Kminus), F * F, inner), 1e-12);
  const auto c = g.casimir();
  EXPECT_LE(max_abs_diff(c, Complex(kappa * (kappa - 1.0)) * FockOperator::identity(sp), inner), 1e-10);
  EXPECT_EQ(hermiticity_defect(g.K1().matrix()), 0.0);
}

TEST(Su11, DisplacementMatchesPhaseState) {
  const TruncatedSpace sp(96);
  const PhaseParams p(1.2, 0.0);
  for (double rho : {0.2, 0.5}) {
    const DiskPoint pt(rho, 0.9);
    const Vector d = displacement_state(sp, p, pt);
    const PhaseState s(sp, p, pt);
    EXPECT_LE((d - s.coeffs()).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Quadrature, ValidationAndMass) {
  EXPECT_THROW(DiskQuadrature(0.0, 4, 8), DomainError);
  EXPECT_THROW(DiskQuadrature(1.0, 4, 7), DomainError);
  const DiskQuadrature q(0.7, 6, 8);
  EXPECT_NEAR(q.integrate([](const DiskPoint&) { return 1.0; }), 1.0, 1e-14);
  EXPECT_EQ(q.radial_exactness(), 11u);
}

TEST(Quadrature, BetaMoments) {
  for (double nu : {0.1, 0.5, 1.0, 3.0, 7.5}) {
    for (std::size_t nr : {1u, 3u, 8u, 16u, 32u}) {
      const DiskQuadrature q(nu, nr, 2);
      for (std::size_t j = 0; j <= q.radial_exactness(); ++j) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < q.t_nodes().size(); ++i) sum += q.t_weights()(i) * std::pow(q.t_nodes()(i), j);
        EXPECT_NEAR(sum / beta_function(nu, double(j) + 1.0), 1.0, 1e-12) << nu << " " << nr << " " << j;
      }
      for (Eigen::Index i = 0; i < q.t_nodes().size(); ++i) {
        EXPECT_GT(q.t_nodes()(i), 0.0);
        EXPECT_LT(q.t_nodes()(i), 1.0);
      }
    }
  }
  const DiskQuadrature q(1.0, 2, 2);
  EXPECT_NEAR(q.integrate([](const DiskPoint& p) { return std::pow(p.rho(), 6); }), 0.25, 1e-15);
}

TEST(Quadrature, Completeness) {
  for (double nu : {0.5, 1.0, 3.0}) {
    const PhaseParams p(nu, 0.0);
    EXPECT_LE(completeness_residual(TruncatedSpace(32), p, disk_quadrature(p, 32, 64), 20), 1e-10);
    EXPECT_LE(completeness_residual(TruncatedSpace(8), p, disk_quadrature(p, 1, 2), 0), 1e-12);
  }
  const PhaseParams p(1.0, 0.0);
  EXPECT_THROW(completeness_residual(TruncatedSpace(32), p, disk_quadrature(p, 4, 64), 20), QuadratureUnderResolved);
  EXPECT_THROW(completeness_residual(TruncatedSpace(32), p, disk_quadrature(p, 32, 40), 20), QuadratureUnderResolved);
}

TEST(Quadrature, SmallNuMassEscapesToBoundary) {
  // A rule built for nu = 1 misses the (1-t)^{nu-1} mass piling up at t = 1
  // when nu is tiny; the rule built for the actual weight keeps it exactly.
  const double nu = 1e-3;
  const DiskQuadrature plain(1.0, 16, 2);
  double naive = 0.0;
  for (Eigen::Index i = 0; i < plain.t_nodes().size(); ++i) {
    naive += plain.t_weights()(i) * std::pow(1.0 - plain.t_nodes()(i), nu - 1.0);
  }
  EXPECT_GT(std::abs(nu * naive - 1.0), 0.1);
  EXPECT_NEAR(DiskQuadrature(nu, 16, 2).integrate([](const DiskPoint&) { return 1.0; }), 1.0, 1e-12);
}

TEST(PhaseFunction, BasicValuesAndBounds) {
  EXPECT_EQ(quantum_phase_function(0.3, DiskPoint(0.0, 1.0)), 0.3 + kPi);
  EXPECT_NEAR(quantum_phase_function(0.3, DiskPoint(0.77, 0.3)), 0.3 + kPi, 1e-15);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double rho = 0.9999 * i / 99.0;
      const double v = quantum_phase_function(0.0, DiskPoint(rho, kTwoPi * j / 100.0));
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, kTwoPi);
    }
  }
  // never reads nu
  EXPECT_EQ(quantum_phase_function(PhaseParams(0.1, 0.2), DiskPoint(0.5, 1.0)),
            quantum_phase_function(PhaseParams(9.0, 0.2), DiskPoint(0.5, 1.0)));
}

TEST(PhaseFunction, SeriesEquivalence) {
  const double rho = 0.9;
  const std::size_t K = 200;
  const double tail = std::pow(rho, K + 1) / ((K + 1) * (1.0 - rho));
  for (int j = 0; j < 1000; ++j) {
    const DiskPoint pt(rho, kTwoPi * j / 1000.0);
    EXPECT_LE(std::abs(quantum_phase_series(0.4, pt, K) - quantum_phase_function(0.4, pt)), 2.0 * tail + 1e-13);
  }
}

TEST(PhaseFunction, DiagonalExpectation) {
  const TruncatedSpace sp(128);
  const PhaseParams p(1.0, 0.0);
  const auto rep = norm_bound_report(FockState::number(sp, 0), p);
  const auto phi = make_Phi_series(sp, p, SeriesBudget::fixed(127, rep, sp));
  EXPECT_EQ(diagonal_phase_expectation(PhaseState(sp, p, DiskPoint(0.0, 0.0)), phi).value, kPi);
  const PhaseState s(sp, p, DiskPoint(0.5, kPi / 2));
  const auto e = diagonal_phase_expectation(s, phi);
  EXPECT_NEAR(e.value, kPi - 2.0 * std::atan(0.5), e.slack);
  EXPECT_LE(std::abs(e.value - (kPi - 2.0 * std::atan(0.5))), 1e-12);

  // shifting theta and phi0 together shifts the result by chi
  const double chi = 0.8;
  const PhaseParams q = p.with_phi0(chi);
  const auto phi_q = make_Phi_series(sp, q, SeriesBudget::fixed(127, rep, sp));
  const auto e2 = diagonal_phase_expectation(PhaseState(sp, q, DiskPoint(0.5, kPi / 2 + chi)), phi_q);
  EXPECT_NEAR(e2.value - e.value, chi, 1e-12);
}

TEST(Aharonov, MapAndConvergence) {
  EXPECT_THROW(aharonov_map(Complex(1.0), 0.0), DomainError);
  EXPECT_THROW(aharonov_map(Complex(2.0), 3.0), DomainError);
  const auto a0 = aharonov_map(Complex(0.0), 5.0);
  EXPECT_EQ(a0.point.rho(), 0.0);
  const TruncatedSpace sp(64);
  const Vector glauber = glauber_coherent(sp, Complex(1.0));
  double prev = 1e300;
  for (double k : {3.0, 10.0, 30.0, 100.0}) {
    const auto a = aharonov_map(Complex(1.0), k);
    EXPECT_LT(a.point.rho(), 1.0);
    EXPECT_EQ(a.params.nu(), k);
    const PhaseState s(sp, a.params, a.point);
    const auto [F, Fp] = make_F(sp, a.params);
    EXPECT_LE((std::sqrt(k + 1.0) * F.apply(s.coeffs()) - s.coeffs()).norm(), 1e-12);
    const double d = (s.coeffs() - glauber).norm();
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 0.05);
}
