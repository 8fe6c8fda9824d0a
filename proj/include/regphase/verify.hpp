#pragma once

// Named invariant checks over every module, parameterized so the CLI's
// verify command and the acceptance harness can run them at their own sizes.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "regphase/figures.hpp"
#include "regphase/phase_operator.hpp"
#include "regphase/polar.hpp"
#include "regphase/povm.hpp"
#include "regphase/su11.hpp"

namespace regphase::verify {

inline std::string tag(const std::string& name, std::size_t m) { return name + " M=" + std::to_string(m); }

inline std::string tag(const std::string& name, double nu) { return name + " nu=" + rho_label(nu); }

inline Vector random_coeffs(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index support) {
  std::normal_distribution<double> g;
  Vector v = Vector::Zero(dim);
  for (Eigen::Index n = 0; n < support; ++n) v(n) = {g(rng), g(rng)};
  return v;
}

inline std::vector<Check> ladder(std::size_t m) {
  const TruncatedSpace sp(m);
  const auto [E, Ep] = make_ladder(sp);
  const auto N = make_number(sp);
  const auto id = FockOperator::identity(sp);
  const Eigen::Index inner = sp.size() - 1;
  const Matrix p0 = vacuum_projector(sp).matrix();
  std::vector<Check> out;
  out.push_back(check_at_most(tag("E E+ = 1 (interior)", m), max_abs_diff(E * Ep, id, inner), 1e-12));
  out.push_back(check_at_most(tag("E+ E = 1 - |0><0|", m), max_abs_diff((Ep * E).matrix(), id.matrix() - p0, sp.size()),
                              1e-12));
  out.push_back(check_at_most(tag("[E, E+] = |0><0| (interior)", m), max_abs_diff(commutator(E, Ep).matrix(), p0, inner),
                              1e-12));
  out.push_back(check_at_most(tag("[N, E] = -E", m), max_abs_diff(commutator(N, E), Complex(-1.0) * E, sp.size()), 1e-12));
  out.push_back(check_at_most(tag("[N, E+] = E+", m), max_abs_diff(commutator(N, Ep), Ep, sp.size()), 1e-12));
  out.push_back(check_at_most(tag("E N E+ = N + 1 (interior)", m), max_abs_diff(E * N * Ep, N + id, inner), 1e-12));
  out.push_back(check_at_most(tag("E+ (N+1) E = N", m), max_abs_diff(Ep * (N + id) * E, N, sp.size()), 1e-12));
  const auto [A, Ap] = make_amplitude(sp);
  out.push_back(check_at_most(tag("A+ A = N", m), max_abs_diff(Ap * A, N, sp.size()), 1e-12));
  return out;
}

inline std::vector<Check> weight_and_bounds(std::size_t m, const std::vector<double>& nus, std::size_t grid,
                                            std::size_t states, std::uint64_t seed) {
  std::vector<Check> out;
  std::mt19937_64 rng(seed);
  const TruncatedSpace sp(m);
  const std::size_t kmax = std::min<std::size_t>(20, m - 1);
  for (double nu : nus) {
    // finite product as the oracle for the log-gamma form
    double worst = 0.0;
    for (std::size_t n = 0; n <= 60; n += 3) {
      double f = 1.0;
      for (std::size_t k = 1; k <= 60; ++k) {
        f *= (double(n) + double(k)) / (double(n) + nu + double(k));
        worst = std::max(worst, std::abs(f_weight(n, k, nu) / f - 1.0));
      }
    }
    out.push_back(check_at_most(tag("f_k(n) vs finite product", nu), worst, 1e-12));
    try {
      const auto rep = check_pointwise_bounds(grid, grid, nu);
      out.push_back(check_at_most(tag("pointwise f_k(n) bounds (max ratio < 1)", nu), rep.max_ratio(), 1.0 - 1e-15));
    } catch (const BoundViolation&) {
      out.push_back({tag("pointwise f_k(n) bounds (max ratio < 1)", nu), false, 1.0, 1.0});
    }
    const PhaseParams p(nu, 0.0);
    const auto table = F_power_table(sp, p, kmax);
    double ratio = 0.0;
    const auto support = static_cast<Eigen::Index>(std::max<std::size_t>(1, (5 * m) / 8));
    for (std::size_t s = 0; s < states; ++s) {
      const FockState psi(sp, random_coeffs(rng, sp.size(), support));
      const auto rep = norm_bound_report(psi, p);
      for (std::size_t k = 1; k <= kmax; ++k) {
        const double limit = rep.b_bar / std::pow(double(k) + nu, nu);
        ratio = std::max({ratio, (table[k - 1] * psi.coeffs()).squaredNorm() / limit,
                          (table[k - 1].adjoint() * psi.coeffs()).squaredNorm() / limit});
      }
    }
    out.push_back(check_at_most(tag("||F^k psi||^2 < b_bar/(k+nu)^nu, max ratio", nu), ratio, 1.0 - 1e-15));
  }
  return out;
}

inline std::vector<Check> phase_operator(std::size_t m, const PhaseParams& p, const SeriesBudget& b) {
  const TruncatedSpace sp(m);
  std::vector<Check> out;
  const auto series = make_Phi_series(sp, p, b);
  const auto closed = phi_closed_form(sp, p);
  out.push_back(check_at_most("Phi series vs closed form (<= tail + 1e-12)", max_abs_diff(series, closed, sp.size()),
                              b.tail_bound + 1e-12));
  double diag = 0.0;
  for (Eigen::Index r = 0; r < sp.size(); ++r) diag = std::max(diag, std::abs(series(r, r) - (p.phi0() + kPi)));
  out.push_back(check_at_most("Phi diagonal = phi0 + pi", diag, 0.0));
  out.push_back(check_at_most("Phi Hermitian", hermiticity_defect(series.matrix()), 1e-12));
  const auto c = make_number_phase_commutator(sp, p, b);
  out.push_back(check_at_most("[N, Phi] = i - 2 pi i P_phi0 (interior)", c.identity_residual, 1e-12));
  return out;
}

inline Check garrison_wong_limit(std::size_t m) {
  const PhaseParams p(1e-6, 0.0);
  double worst = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s)
      worst = std::max(worst, std::abs(phi_matrix_element(r, s, p) - gw_matrix_element(r, s, GwBase::Shifted)));
  return check_at_most("Phi elements -> Garrison-Wong at nu=1e-6", worst, 1e-5);
}

inline Check phi_spectrum(std::size_t m, const PhaseParams& p, const SeriesBudget& b) {
  const TruncatedSpace sp(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(make_Phi_series(sp, p, b).matrix(), Eigen::EigenvaluesOnly);
  const double below = p.phi0() - es.eigenvalues().minCoeff();
  const double above = es.eigenvalues().maxCoeff() - (p.phi0() + kTwoPi);
  return check_at_most("Phi spectrum within [phi0, phi0+2pi] +- 0.1", std::max(below, above), 0.1);
}

inline Check hilbert(std::size_t pairs, std::size_t r_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double ratio = 0.0;
  bool holds = true;
  const auto n = static_cast<Eigen::Index>(r_max);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vector chi = random_coeffs(rng, n, n);
    const Vector psi = random_coeffs(rng, n, n);
    const auto h = hilbert_bilinear_check(chi, psi, r_max);
    holds = holds && h.holds && h.max_abs_T <= h.bound;
    ratio = std::max(ratio, h.max_abs_T / h.bound);
  }
  return {"|T_r| <= pi ||chi|| ||psi||, max ratio", holds, ratio, 1.0};
}

inline constexpr double kEigenRoundoff = 1e-15;

inline std::vector<Check> su11(std::size_t m, const std::vector<double>& nus) {
  std::vector<Check> out;
  const TruncatedSpace sp(m);
  const Eigen::Index inner = sp.size() - 1;
  for (double nu : nus) {
    const PhaseParams p(nu, 0.0);
    double excess = 0.0;
    double stats = 0.0;
    for (double rho : {0.0, 0.2, 0.5, 0.8}) {
      for (double th : {0.0, 1.0, 4.0}) {
        const PhaseState s(sp, p, DiskPoint(rho, th));
        // the floor is the roundoff of forming F|z> - z|z> for a unit vector
        excess = std::max(excess, s.eigen_residual() - 2.0 * std::abs(s.coeffs()(sp.size() - 1)) - kEigenRoundoff);
        // number statistics need a tail whose first two moments are negligible
        const double t = rho * rho;
        const double reach = double(m) + 1.0 / (1.0 - t);
        const bool resolved = s.tail_mass() * reach * reach < 1e-11 * (1.0 + nu) * t;
        if (!s.tail_warning() && rho > 0.0 && resolved) stats = std::max(stats, number_stats(s).max_relative_discrepancy);
      }
    }
    out.push_back(check_at_most(tag("||F|z> - z|z>|| - 2|w_{M-1}| - eps (rho<=0.8)", nu), excess, 0.0));
    out.push_back(check_at_most(tag("number stats closed vs direct (rel)", nu), stats, 1e-9));
    const auto g = make_su11_generators(sp, p);
    const auto [F, Fp] = make_F(sp, p);
    double alg = 0.0;
    alg = std::max(alg, commutator_defect(g.K0, g.Kplus, g.Kplus, sp.size()));
    alg = std::max(alg, commutator_defect(g.K0, g.Kminus, Complex(-1.0) * g.Kminus, sp.size()));
    alg = std::max(alg, commutator_defect(F, g.Kplus, FockOperator::identity(sp), inner));
    alg = std::max(alg, commutator_defect(F, g.K0, F, sp.size()));
    alg = std::max(alg, commutator_defect(F, g.Kminus, F * F, inner));
    out.push_back(check_at_most(tag("[K0,K+-] = +-K+-, [F,K+] = 1, [F,K0] = F, [F,K-] = F^2 (rel)", nu), alg, 1e-12));
    out.push_back(check_at_most(tag("[K-, K+] = 2 K0 (interior, rel)", nu),
                                commutator_defect(g.Kminus, g.Kplus, Complex(2.0) * g.K0, inner), 1e-12));
    const double kappa = p.kappa();
    out.push_back(check_at_most(
        tag("Casimir = kappa(kappa-1) (interior)", nu),
        max_abs_diff(g.casimir(), Complex(kappa * (kappa - 1.0)) * FockOperator::identity(sp), inner), 1e-10));
  }
  return out;
}

inline std::vector<Check> completeness(std::size_t m, const std::vector<double>& nus, std::size_t n_max,
                                       std::size_t n_r, std::size_t n_theta) {
  std::vector<Check> out;
  const TruncatedSpace sp(m);
  for (double nu : nus) {
    const PhaseParams p(nu, 0.0);
    const auto quad = disk_quadrature(p, n_r, n_theta);
    double worst = 0.0;
    for (std::size_t j = 0; j <= quad.radial_exactness(); ++j) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < quad.t_nodes().size(); ++i) sum += quad.t_weights()(i) * std::pow(quad.t_nodes()(i), j);
      worst = std::max(worst, std::abs(sum / beta_function(nu, double(j) + 1.0) - 1.0));
    }
    out.push_back(check_at_most(tag("Gauss-Jacobi Beta moments (rel)", nu), worst, 1e-12));
    out.push_back(check_at_most(tag("completeness ||R - 1||_max n_max=" + std::to_string(n_max), nu),
                                completeness_residual(sp, p, quad, n_max), 1e-10));
  }
  return out;
}

inline std::vector<Check> phase_function(std::size_t m, double nu) {
  std::vector<Check> out;
  const double rho = 0.9;
  const std::size_t K = 200;
  const double tail = 2.0 * std::pow(rho, double(K + 1)) / (double(K + 1) * (1.0 - rho));
  double excess = 0.0;
  for (int j = 0; j < 1000; ++j) {
    const DiskPoint z(rho, kTwoPi * j / 1000.0);
    excess = std::max(excess, std::abs(quantum_phase_series(0.0, z, K) - quantum_phase_function(0.0, z)) - tail);
  }
  out.push_back(check_at_most("phi(z) arctan vs series - geometric tail (rho=0.9, K=200)", excess, 1e-13));

  const TruncatedSpace sp(m);
  const PhaseParams p(nu, 0.0);
  const auto rep = norm_bound_report(FockState::number(sp, 0), p);
  const auto phi = make_Phi_series(sp, p, SeriesBudget::fixed(m - 1, rep, sp));
  double sandwich = 0.0;
  for (double r : {0.0, 0.1, 0.3, 0.5}) {
    for (double th : {0.0, 0.8, 2.0, 3.5, 5.5}) {
      const PhaseState s(sp, p, DiskPoint(r, th));
      const auto e = diagonal_phase_expectation(s, phi);
      sandwich = std::max(sandwich, std::abs(e.value - quantum_phase_function(0.0, s.point())) - e.slack);
    }
  }
  out.push_back(check_at_most("<z|Phi|z> vs phi(z) minus slack (rho<=0.5)", sandwich, 0.0));
  return out;
}

inline std::vector<Check> povm(std::size_t m, const PhaseParams& p, std::size_t K, std::size_t n_phi,
                               std::size_t n_r, std::uint64_t seed) {
  std::vector<Check> out;
  const TruncatedSpace sp(m);
  const auto rep = norm_bound_report(FockState::number(sp, 0), p);
  const auto b = SeriesBudget::fixed(K, rep, sp);
  const auto grid = PhaseGrid::uniform(p.phi0(), n_phi);
  const auto sr = spectral_resolution_check(sp, p, b, grid);
  out.push_back(check_at_most("int P_phi dphi = 1", sr.identity_residual, 1e-12));
  out.push_back(check_at_most("F_k = int e^{ik phi} P_phi dphi, |k| <= " + std::to_string(K), sr.max_Fk_residual, 1e-10));
  out.push_back(check_at_most("Phi = int psi dE_psi", sr.phi_residual, 1e-10));

  // the third derivative grows like K^3, so the step shrinks with K
  const double h = 1e-3 / double(K);
  double fd = 0.0;
  for (double rel : {0.7, 2.9, 5.1}) {
    const double psi = p.phi0() + rel;
    const Matrix d = (make_E_psi(sp, p, b, psi + h).matrix() - make_E_psi(sp, p, b, psi - h).matrix()) / (2.0 * h);
    fd = std::max(fd, (d - make_P_phi(sp, p, b, psi).matrix()).cwiseAbs().maxCoeff());
  }
  out.push_back(check_at_most("dE_psi/dpsi = P_psi (central difference)", fd, 1e-6));

  const auto full = SeriesBudget::fixed(m - 1, rep, sp);
  double uniform = 0.0;
  for (std::size_t n : {std::size_t(0), m / 3, m - 1}) {
    const auto d = phase_distribution(DensityOperator::pure(FockState::number(sp, n)), p, full, grid);
    for (double g : d.g) uniform = std::max(uniform, std::abs(g - 1.0 / kTwoPi));
  }
  out.push_back(check_at_most("g = 1/2pi for number states", uniform, 1e-12));

  std::mt19937_64 rng(seed);
  const auto support = static_cast<Eigen::Index>(std::min<std::size_t>(m, 24));
  Matrix w = Matrix::Zero(sp.size(), sp.size());
  for (Eigen::Index c = 0; c < 3; ++c) w.col(c) = random_coeffs(rng, sp.size(), support);
  Matrix mixed = w * w.adjoint();
  mixed /= mixed.trace();
  mixed = 0.5 * (mixed + mixed.adjoint()).eval();
  const DensityOperator rho(sp, mixed);
  const auto d = phase_distribution(rho, p, full, grid);
  out.push_back(check_at_most("int g dphi = 1", std::abs(d.normalization - 1.0), 1e-10));
  out.push_back(check_at_least("g >= -slack", d.min_g, -1e-12));
  out.push_back(check_at_most("G nondecreasing (largest drop)", d.max_G_drop, 1e-12));
  out.push_back(check_at_most("G(phi0 + 2pi) = 1", std::abs(d.G.back() - 1.0), 1e-12));

  const auto t = f_moments(rho, p, m - 1);
  std::vector<double> phis;
  for (std::size_t j = 0; j < grid.size(); j += std::max<std::size_t>(1, grid.size() / 16)) phis.push_back(grid.points()[j]);
  const auto quad = disk_quadrature(p, std::max<std::size_t>(n_r, m / 2 + 1), 2);
  const auto gd = phase_density_disk(rho, p, quad, phis);
  double disk = 0.0;
  for (std::size_t q = 0; q < phis.size(); ++q) disk = std::max(disk, std::abs(gd[q] - density_from_moments(t, 1.0, phis[q])));
  out.push_back(check_at_most("g trace form vs disk form", disk, 1e-8));

  const std::size_t shift = std::max<std::size_t>(1, n_phi / 7);
  const double chi = kTwoPi * double(shift) / double(n_phi);
  const auto dr = phase_distribution(rho.rotated(chi), p, full, grid);
  double cov = 0.0;
  for (std::size_t j = 0; j < n_phi; ++j) cov = std::max(cov, std::abs(dr.g[(j + shift) % n_phi] - d.g[j]));
  out.push_back(check_at_most("covariance g'(phi) = g(phi - chi)", cov, 1e-10));
  return out;
}

inline std::vector<Check> loudon() {
  const TruncatedSpace sp(8);
  Vector plus = Vector::Zero(8);
  plus(0) = plus(1) = 1.0;
  const std::vector<double> nus{1.0, 0.3, 0.1, 0.03};
  const auto rep = loudon_limit_check(DensityOperator::pure(FockState(sp, plus)), PhaseGrid::uniform(0.0, 512), nus);
  std::vector<Check> out;
  out.push_back(check_true("max|g_nu - g_0| decreases along nu = 1, 0.3, 0.1, 0.03", rep.monotone));
  double oracle = 0.0;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    // two-level oracle g_nu - g_0 = (1/2pi)(f_1(0)^{1/2} - 1) cos(phi); the grid hits |cos| = 1
    oracle = std::max(oracle, std::abs(rep.max_deviation[i] - (1.0 - 1.0 / std::sqrt(1.0 + nus[i])) / kTwoPi));
  }
  out.push_back(check_at_most("two-level oracle agreement", oracle, 1e-12));
  out.push_back(check_at_most("max|g_nu - g_0| at nu=0.03", rep.max_deviation.back(), 0.02));
  return out;
}

inline std::vector<Check> aharonov(std::size_t m) {
  const TruncatedSpace sp(m);
  const Vector glauber = glauber_coherent(sp, Complex(1.0));
  std::vector<double> dist;
  double eig = 0.0;
  for (double k : {3.0, 10.0, 30.0, 100.0}) {
    const auto a = aharonov_map(Complex(1.0), k);
    const PhaseState s(sp, a.params, a.point);
    const auto [F, Fp] = make_F(sp, a.params);
    const double boundary = 2.0 * std::sqrt(k + 1.0) * std::abs(s.coeffs()(sp.size() - 1));
    eig = std::max(eig, (std::sqrt(k + 1.0) * F.apply(s.coeffs()) - s.coeffs()).norm() - boundary);
    dist.push_back((s.coeffs() - glauber).norm());
  }
  bool mono = true;
  for (std::size_t i = 1; i < dist.size(); ++i) mono = mono && dist[i] < dist[i - 1];
  std::vector<Check> out;
  out.push_back(check_true("|| |alpha,k> - |alpha> || decreases over k = 3, 10, 30, 100", mono));
  out.push_back(check_at_most("|| |alpha,k=100> - |alpha> ||", dist.back(), 0.05));
  out.push_back(check_at_most("sqrt(k+1) F|z> = alpha|z> beyond boundary term", eig, 1e-12));
  return out;
}

}  // namespace regphase::verify
