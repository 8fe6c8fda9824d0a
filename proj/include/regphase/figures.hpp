#pragma once

// Data behind the three figures: the classical saw-tooth series (fig1), the
// quantum phase function and phase density on circles in the disk (fig2a/b),
// and the classical vs quantum projector functions (fig3a/b). Every table
// comes with the qualitative checks its figure is meant to show.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "regphase/phase_operator.hpp"
#include "regphase/povm.hpp"
#include "regphase/su11.hpp"

namespace regphase {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double limit = 0.0;
};

inline Check check_at_most(std::string name, double measured, double limit) {
  return {std::move(name), measured <= limit, measured, limit};
}

inline Check check_at_least(std::string name, double measured, double limit) {
  return {std::move(name), measured >= limit, measured, limit};
}

inline Check check_true(std::string name, bool ok) { return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0}; }

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> footer;  // free-form summary lines, written as comments
};

struct FigureData {
  Table table;
  std::vector<Check> checks;
};

// count points from lo to hi inclusive
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t j = 0; j < count; ++j) v[j] = count == 1 ? lo : lo + (hi - lo) * double(j) / double(count - 1);
  return v;
}

// distance from x to the nearest of the given points, modulo 2pi
inline double circular_distance(double x, const std::vector<double>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (double p : points) {
    double d = std::fmod(std::abs(x - p), kTwoPi);
    best = std::min({best, d, kTwoPi - d});
  }
  return best;
}

struct Fig1Options {
  std::vector<std::size_t> n_list{11, 61};
  std::size_t points = 2001;
  double lo = -kTwoPi;
  double hi = kTwoPi;
};

inline FigureData fig1_data(const Fig1Options& opt) {
  FigureData out;
  Table& t = out.table;
  t.columns = {"phi", "sawtooth"};
  for (std::size_t n : opt.n_list) t.columns.push_back("s_" + std::to_string(n));
  for (std::size_t n : opt.n_list) t.columns.push_back("sigma_" + std::to_string(n));
  const std::size_t k = opt.n_list.size();
  std::vector<double> s_max(k, -std::numeric_limits<double>::infinity());
  std::vector<double> sigma_min(k, std::numeric_limits<double>::infinity());
  std::vector<double> sigma_max(k, -std::numeric_limits<double>::infinity());
  for (double phi : linspace(opt.lo, opt.hi, opt.points)) {
    std::vector<double> row{phi, sawtooth(phi)};
    for (std::size_t i = 0; i < k; ++i) {
      const double s = classical_phase({opt.n_list[i], ClassicalMode::PartialSum}, phi);
      s_max[i] = std::max(s_max[i], s);
      row.push_back(s);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double s = classical_phase({opt.n_list[i], ClassicalMode::FejerMean}, phi);
      sigma_min[i] = std::min(sigma_min[i], s);
      sigma_max[i] = std::max(sigma_max[i], s);
      row.push_back(s);
    }
    t.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::string n = std::to_string(opt.n_list[i]);
    const double over = gibbs_overshoot(opt.n_list[i]);
    t.footer.push_back("gibbs_overshoot n=" + n + " " + std::to_string(over) + " (" +
                       std::to_string(100.0 * over / kTwoPi) + "% of jump)");
    out.checks.push_back(check_at_least("fig1 sigma_" + n + " >= 0", sigma_min[i], 0.0));
    out.checks.push_back(check_at_most("fig1 sigma_" + n + " <= 2pi", sigma_max[i], kTwoPi));
    out.checks.push_back(check_at_least("fig1 gibbs overshoot n=" + n, over, 1e-3));
  }
  const std::size_t last = k - 1;
  out.checks.push_back(
      check_true("fig1 s_" + std::to_string(opt.n_list[last]) + " column exceeds 2pi", s_max[last] > kTwoPi));
  return out;
}

struct Fig2Options {
  std::vector<double> rho_list;
  std::size_t points = 2001;
  double phi0 = 0.0;
  double phi_prime = kPi / 2;
};

inline Fig2Options fig2a_defaults() { return {{0.3, 0.6, 0.9, 0.99, 0.999}, 2001, 0.0, kPi / 2}; }
inline Fig2Options fig2b_defaults() { return {{0.8, 0.9, 0.95, 0.97}, 2001, 0.0, kPi / 2}; }

inline std::string rho_label(double rho) {
  std::string s = std::to_string(rho);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// phi(z) against theta for each radius; the sharpest curve approaches the saw-tooth.
inline FigureData fig2a_data(const Fig2Options& opt) {
  FigureData out;
  Table& t = out.table;
  t.columns = {"theta"};
  for (double r : opt.rho_list) t.columns.push_back("phi_rho_" + rho_label(r));
  t.columns.push_back("sawtooth");
  const auto thetas = linspace(opt.phi0, opt.phi0 + kTwoPi, opt.points);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> worst(opt.rho_list.size(), 0.0);
  const std::vector<double> jumps{opt.phi0};
  for (double th : thetas) {
    std::vector<double> row{th};
    const double classical = opt.phi0 + sawtooth(th - opt.phi0);
    for (std::size_t i = 0; i < opt.rho_list.size(); ++i) {
      const double v = quantum_phase_function(opt.phi0, DiskPoint(opt.rho_list[i], th));
      lo = std::min(lo, v - opt.phi0);
      hi = std::max(hi, v - opt.phi0);
      if (circular_distance(th, jumps) > 0.1) worst[i] = std::max(worst[i], std::abs(v - classical));
      row.push_back(v);
    }
    row.push_back(classical);
    t.rows.push_back(std::move(row));
  }
  out.checks.push_back(check_true("fig2a values inside (phi0, phi0+2pi)", lo > 0.0 && hi < kTwoPi));
  for (std::size_t i = 1; i < worst.size(); ++i) {
    out.checks.push_back(check_true("fig2a steepens toward saw-tooth rho=" + rho_label(opt.rho_list[i]),
                                    worst[i] < worst[i - 1]));
  }
  if (!opt.rho_list.empty() && opt.rho_list.back() >= 0.999) {
    out.checks.push_back(check_at_most("fig2a rho=" + rho_label(opt.rho_list.back()) + " within 0.05 of saw-tooth",
                                       worst.back(), 0.05));
  }
  return out;
}

// Poisson kernel against theta with phi' fixed; the peak sits at phi0 + phi'.
inline FigureData fig2b_data(const Fig2Options& opt) {
  FigureData out;
  Table& t = out.table;
  t.columns = {"theta"};
  for (double r : opt.rho_list) t.columns.push_back("p_rho_" + rho_label(r));
  const auto thetas = linspace(0.0, kTwoPi, opt.points);
  std::vector<double> mass(opt.rho_list.size(), 0.0);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    std::vector<double> row{thetas[j]};
    for (std::size_t i = 0; i < opt.rho_list.size(); ++i) {
      const double v = poisson_kernel(DiskPoint(opt.rho_list[i], thetas[j]), opt.phi0, opt.phi_prime);
      if (j + 1 < thetas.size()) mass[i] += v * kTwoPi / double(thetas.size() - 1);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  double prev_peak = 0.0;
  for (std::size_t i = 0; i < opt.rho_list.size(); ++i) {
    const double r = opt.rho_list[i];
    const double peak = poisson_kernel(DiskPoint(r, opt.phi0 + opt.phi_prime), opt.phi0, opt.phi_prime);
    const double closed = (1.0 + r) / (1.0 - r) / kTwoPi;
    out.checks.push_back(check_at_most("fig2b peak closed form rho=" + rho_label(r),
                                       std::abs(peak - closed) / closed, 1e-12));
    out.checks.push_back(check_true("fig2b peak sharpens rho=" + rho_label(r), peak > prev_peak));
    // an N-point trapezoid sum of the kernel aliases to (1 + rho^N)/(1 - rho^N)
    const double rn = std::pow(r, double(thetas.size() - 1));
    out.checks.push_back(
        check_at_most("fig2b unit mass (aliased) rho=" + rho_label(r), std::abs(mass[i] - (1.0 + rn) / (1.0 - rn)), 1e-9));
    prev_peak = peak;
  }
  return out;
}

struct Fig3Options {
  std::vector<double> rho_list{0.0, 0.5, 0.9, 0.99, 0.999};
  std::size_t points = 2001;
  double phi0 = 0.0;
  double psi_cut = kPi / 2;
};

// (a) the classical step alone; (b) adds the quantum projector function per radius.
inline FigureData fig3_data(const Fig3Options& opt, bool with_quantum) {
  if (!(opt.psi_cut > opt.phi0) || opt.psi_cut > opt.phi0 + kTwoPi) {
    throw DomainError("fig3: psi must lie in (phi0, phi0 + 2pi]");
  }
  FigureData out;
  Table& t = out.table;
  t.columns = {"theta", "classical"};
  if (with_quantum) {
    for (double r : opt.rho_list) t.columns.push_back("e_rho_" + rho_label(r));
  }
  const auto thetas = linspace(opt.phi0, opt.phi0 + kTwoPi, opt.points);
  const std::vector<double> jumps{opt.phi0, opt.psi_cut};
  bool binary = true;
  double rho0_dev = 0.0;
  std::vector<double> worst(opt.rho_list.size(), 0.0);
  double series_dev = 0.0;
  for (double th : thetas) {
    const int c = classical_projector(opt.psi_cut, th, opt.phi0);
    binary = binary && (c == 0 || c == 1);
    std::vector<double> row{th, double(c)};
    if (with_quantum) {
      for (std::size_t i = 0; i < opt.rho_list.size(); ++i) {
        const DiskPoint z(opt.rho_list[i], th);
        const double v = quantum_projector_function(z, opt.psi_cut, opt.phi0);
        if (opt.rho_list[i] == 0.0) rho0_dev = std::max(rho0_dev, std::abs(v - (opt.psi_cut - opt.phi0) / kTwoPi));
        if (circular_distance(th, jumps) > 0.1) worst[i] = std::max(worst[i], std::abs(v - double(c)));
        if (opt.rho_list[i] <= 0.5) {
          series_dev = std::max(series_dev, std::abs(v - quantum_projector_kernel(z, opt.psi_cut, opt.phi0, 80)));
        }
        row.push_back(v);
      }
    }
    t.rows.push_back(std::move(row));
  }
  out.checks.push_back(check_true("fig3 classical column in {0,1}", binary));
  if (!with_quantum) return out;
  out.checks.push_back(check_at_most("fig3 rho=0 column equals (psi-phi0)/2pi", rho0_dev, 1e-15));
  out.checks.push_back(check_at_most("fig3 closed form vs series (rho<=0.5)", series_dev, 1e-12));
  for (std::size_t i = 1; i < worst.size(); ++i) {
    out.checks.push_back(check_true("fig3 steepens toward classical step rho=" + rho_label(opt.rho_list[i]),
                                    worst[i] < worst[i - 1]));
  }
  if (!opt.rho_list.empty() && opt.rho_list.back() >= 0.999) {
    out.checks.push_back(check_at_most("fig3 rho=" + rho_label(opt.rho_list.back()) + " within 0.05 of classical",
                                       worst.back(), 0.05));
  }
  return out;
}

}  // namespace regphase
