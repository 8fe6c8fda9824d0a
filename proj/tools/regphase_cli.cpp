// regphase: figure data, distributions, matrix elements and the invariant
// suite for the regular phase operator on a truncated Fock space.
//
// Exit codes: 0 success, 1 a check failed, 2 bad configuration or domain error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regphase/regphase.hpp"
#include "regphase/figures.hpp"
#include "regphase/verify.hpp"

using namespace regphase;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;

struct RunConfig {
  std::string command;
  double nu = 1.0;
  double phi0 = 0.0;
  std::size_t dim = 64;
  std::optional<std::size_t> series_k;
  double target_tail = 1e-8;
  std::size_t nphi = 0;  // 0: per-command default
  std::size_t nr = 32;
  std::size_t ntheta = 64;
  std::optional<double> psi;
  std::vector<double> rho;
  std::string state = "n=0";
  std::string out;
  bool deterministic = false;
  bool verbose = false;
  std::uint64_t seed = 2024;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(const RunConfig& c) {
  std::ostringstream s;
  s << "command=" << c.command << " nu=" << fmt(c.nu) << " phi0=" << fmt(c.phi0) << " dim=" << c.dim;
  if (c.series_k) {
    s << " series-k=" << *c.series_k;
  } else {
    s << " target-tail=" << fmt(c.target_tail);
  }
  s << " nphi=" << c.nphi << " nr=" << c.nr << " ntheta=" << c.ntheta;
  if (c.psi) s << " psi=" << fmt(*c.psi);
  if (!c.rho.empty()) {
    s << " rho=";
    for (std::size_t i = 0; i < c.rho.size(); ++i) s << (i ? "," : "") << fmt(c.rho[i]);
  }
  if (c.command == "distributions") s << " state=" << c.state;
  s << " seed=" << c.seed << " deterministic=" << (c.deterministic ? 1 : 0);
  return s.str();
}

SeriesBudget resolve_budget(const RunConfig& c, TruncatedSpace sp, const BoundReport& report) {
  if (c.series_k) return SeriesBudget::fixed(*c.series_k, report, sp);
  return SeriesBudget::for_target(c.target_tail, report, sp);
}

// "n=<int>" | "z=<rho>@<theta>" | "alpha=<re>,<im>" | "file=<path>"
DensityOperator parse_state(const std::string& spec, TruncatedSpace sp, const PhaseParams& p) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw DomainError("state: expected <kind>=<value>, got '" + spec + "'");
  const std::string kind = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);
  auto number = [&](const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw DomainError("state: bad number '" + text + "' in '" + spec + "'");
    return v;
  };
  if (kind == "n") {
    const double n = number(value);
    if (n < 0 || n != std::floor(n)) throw DomainError("state: n must be a nonnegative integer");
    return DensityOperator::pure(FockState::number(sp, static_cast<std::size_t>(n)));
  }
  if (kind == "z") {
    const auto at = value.find('@');
    if (at == std::string::npos) throw DomainError("state: expected z=<rho>@<theta>");
    const PhaseState z(sp, p, DiskPoint(number(value.substr(0, at)), number(value.substr(at + 1))));
    if (z.tail_warning()) {
      std::cerr << "warning: phase state loses " << z.tail_mass() << " of its norm above level " << sp.dim() - 1
                << "; increase --dim\n";
    }
    return DensityOperator::pure(sp, z.coeffs());
  }
  if (kind == "alpha") {
    const auto comma = value.find(',');
    if (comma == std::string::npos) throw DomainError("state: expected alpha=<re>,<im>");
    return DensityOperator::pure(sp, glauber_coherent(sp, {number(value.substr(0, comma)), number(value.substr(comma + 1))}));
  }
  if (kind == "file") {
    std::ifstream in(value);
    if (!in) throw DomainError("state: cannot read '" + value + "'");
    Vector v = Vector::Zero(sp.size());
    std::string line;
    Eigen::Index n = 0;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
      std::istringstream row(line);
      double re = 0.0;
      double im = 0.0;
      if (!(row >> re >> im)) throw DomainError("state: bad coefficient line '" + line + "'");
      if (n >= sp.size()) throw DimensionError("state: file has more coefficients than --dim");
      v(n++) = {re, im};
    }
    return DensityOperator::pure(FockState(sp, v));
  }
  throw DomainError("state: unknown kind '" + kind + "'");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_csv(std::ostream& os, const RunConfig& c, const Table& t) {
  os << "# config: " << describe(c) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << "\n";
  }
  for (const auto& line : t.footer) os << "# " << line << "\n";
}

bool report(const std::vector<Check>& checks, bool verbose) {
  bool ok = true;
  for (const auto& ch : checks) {
    ok = ok && ch.passed;
    if (verbose || !ch.passed) {
      std::fprintf(stderr, "%s %-72s %.3e (limit %.3e)\n", ch.passed ? "ok  " : "FAIL", ch.name.c_str(), ch.measured,
                   ch.limit);
    }
  }
  return ok;
}

// Checks first; data is written only if they all pass.
int emit(const RunConfig& c, const FigureData& data) {
  if (!report(data.checks, c.verbose)) {
    std::fprintf(stderr, "%s: checks failed, no data written\n", c.command.c_str());
    return kExitCheckFailed;
  }
  Output out(c.out);
  write_csv(out.stream(), c, data.table);
  return 0;
}

std::size_t points_or(const RunConfig& c, std::size_t fallback) { return c.nphi ? c.nphi : fallback; }

int cmd_fig1(const RunConfig& c) {
  Fig1Options opt;
  opt.points = points_or(c, opt.points);
  return emit(c, fig1_data(opt));
}

int cmd_fig2(const RunConfig& c, bool b) {
  Fig2Options opt = b ? fig2b_defaults() : fig2a_defaults();
  opt.points = points_or(c, opt.points);
  opt.phi0 = c.phi0;
  if (!c.rho.empty()) opt.rho_list = c.rho;
  return emit(c, b ? fig2b_data(opt) : fig2a_data(opt));
}

int cmd_fig3(const RunConfig& c, bool b) {
  Fig3Options opt;
  opt.points = points_or(c, opt.points);
  opt.phi0 = c.phi0;
  opt.psi_cut = c.psi.value_or(c.phi0 + kPi / 2);
  if (!c.rho.empty()) opt.rho_list = c.rho;
  return emit(c, fig3_data(opt, b));
}

int cmd_distributions(const RunConfig& c) {
  const TruncatedSpace sp(c.dim);
  const PhaseParams p(c.nu, c.phi0);
  const DensityOperator rho = parse_state(c.state, sp, p);
  const auto budget = resolve_budget(c, sp, norm_bound_report(FockState::number(sp, 0), p));
  const auto grid = PhaseGrid::uniform(c.phi0, points_or(c, 512));
  const auto d = phase_distribution(rho, p, budget, grid);
  FigureData data;
  data.table.columns = {"phi", "G", "g"};
  for (std::size_t j = 0; j < grid.size(); ++j) data.table.rows.push_back({d.phi[j], d.G[j], d.g[j]});
  data.table.footer.push_back("normalization " + fmt(d.normalization));
  data.table.footer.push_back("series K=" + std::to_string(budget.K) + " tail_bound=" + fmt(budget.tail_bound) +
                              (budget.complete_on_space ? " (complete on the truncated space)" : ""));
  data.checks.push_back(check_at_most("sum g dphi = 1", std::abs(d.normalization - 1.0), 1e-10));
  data.checks.push_back(check_at_most("G(phi0 + 2pi) = 1", std::abs(d.G.back() - 1.0), 1e-10));
  const double slack = budget.complete_on_space ? 1e-12 : budget.tail_bound;
  data.checks.push_back(check_at_least("g >= -slack", d.min_g, -slack));
  data.checks.push_back(check_at_most("G nondecreasing (largest drop)", d.max_G_drop, slack));
  return emit(c, data);
}

int cmd_matrix_elements(const RunConfig& c) {
  const TruncatedSpace sp(c.dim);
  const PhaseParams p(c.nu, c.phi0);
  const auto budget = resolve_budget(c, sp, norm_bound_report(FockState::number(sp, 0), p));
  const auto series = make_Phi_series(sp, p, budget);
  FigureData data;
  data.table.columns = {"r", "s", "re_phi", "im_phi", "re_2pi_P_phi0", "im_2pi_P_phi0", "re_phi_series", "im_phi_series"};
  double worst = 0.0;
  for (std::size_t r = 0; r < sp.dim(); ++r) {
    for (std::size_t s = 0; s < sp.dim(); ++s) {
      const Complex e = phi_matrix_element(r, s, p);
      const Complex q = kTwoPi * povm_matrix_element(r, s, p.nu(), p.phi0());
      const Complex t = series(Eigen::Index(r), Eigen::Index(s));
      worst = std::max(worst, std::abs(e - t));
      data.table.rows.push_back({double(r), double(s), e.real(), e.imag(), q.real(), q.imag(), t.real(), t.imag()});
    }
  }
  data.table.footer.push_back("series K=" + std::to_string(budget.K) + " tail_bound=" + fmt(budget.tail_bound));
  data.checks.push_back(check_at_most("closed form vs series", worst, budget.tail_bound + 1e-12));
  return emit(c, data);
}

int cmd_verify(const RunConfig& c) {
  const TruncatedSpace sp(c.dim);
  const PhaseParams p(c.nu, c.phi0);
  const auto budget = resolve_budget(c, sp, norm_bound_report(FockState::number(sp, 0), p));
  const std::size_t nphi = points_or(c, std::max<std::size_t>(256, 2 * budget.K + 2));
  const std::size_t n_max = std::min<std::size_t>(20, c.dim - 1);

  struct Section {
    std::string name;
    std::vector<Check> checks;
  };
  std::vector<Section> sections;
  auto add = [&](std::string name, std::vector<Check> checks) { sections.push_back({std::move(name), std::move(checks)}); };
  add("fock-core", verify::ladder(c.dim));
  add("polar-f", verify::weight_and_bounds(c.dim, {c.nu}, 200, 20, c.seed));
  {
    auto checks = verify::phase_operator(c.dim, p, budget);
    checks.push_back(verify::garrison_wong_limit(c.dim));
    checks.push_back(verify::phi_spectrum(c.dim, p, SeriesBudget::fixed(c.dim - 1, norm_bound_report(FockState::number(sp, 0), p), sp)));
    checks.push_back(verify::hilbert(20, c.dim, c.seed));
    add("phase-op", std::move(checks));
  }
  {
    auto checks = verify::su11(c.dim, {c.nu});
    for (auto& x : verify::completeness(c.dim, {c.nu}, n_max, c.nr, c.ntheta)) checks.push_back(x);
    for (auto& x : verify::phase_function(c.dim, c.nu)) checks.push_back(x);
    for (auto& x : verify::aharonov(c.dim)) checks.push_back(x);
    add("su11", std::move(checks));
  }
  {
    auto checks = verify::povm(c.dim, p, budget.K, nphi, c.nr, c.seed);
    for (auto& x : verify::loudon()) checks.push_back(x);
    add("povm", std::move(checks));
  }
  {
    auto checks = fig1_data({}).checks;
    for (auto& x : fig2a_data(fig2a_defaults()).checks) checks.push_back(x);
    for (auto& x : fig2b_data(fig2b_defaults()).checks) checks.push_back(x);
    for (auto& x : fig3_data({}, true).checks) checks.push_back(x);
    add("figures", std::move(checks));
  }

  Output out(c.out);
  std::ostream& os = out.stream();
  os << "# config: " << describe(c) << "\n";
  os << "# series K=" << budget.K << " tail_bound=" << fmt(budget.tail_bound)
     << (budget.complete_on_space ? " (complete on the truncated space)" : "") << "\n";
  std::size_t total = 0;
  std::size_t failed = 0;
  for (const auto& s : sections) {
    os << "[" << s.name << "]\n";
    for (const auto& ch : s.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "  %s %-72s %.3e (limit %.3e)\n", ch.passed ? "PASS" : "FAIL", ch.name.c_str(),
                    ch.measured, ch.limit);
      os << line;
      ++total;
      if (!ch.passed) ++failed;
    }
  }
  os << (total - failed) << "/" << total << " checks passed\n";
  return failed == 0 ? 0 : kExitCheckFailed;
}

int dispatch(const RunConfig& c) {
  if (c.command == "fig1") return cmd_fig1(c);
  if (c.command == "fig2a") return cmd_fig2(c, false);
  if (c.command == "fig2b") return cmd_fig2(c, true);
  if (c.command == "fig3a") return cmd_fig3(c, false);
  if (c.command == "fig3b") return cmd_fig3(c, true);
  if (c.command == "distributions") return cmd_distributions(c);
  if (c.command == "matrix-elements") return cmd_matrix_elements(c);
  return cmd_verify(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular phase operator on a truncated Fock space"};
  RunConfig c;
  app.add_option("command", c.command, "fig1 | fig2a | fig2b | fig3a | fig3b | verify | distributions | matrix-elements")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2a", "fig2b", "fig3a", "fig3b", "verify", "distributions", "matrix-elements"}));
  app.add_option("--nu", c.nu, "decomposition parameter nu > 0")->capture_default_str();
  app.add_option("--phi0", c.phi0, "reference phase phi0")->capture_default_str();
  app.add_option("--dim", c.dim, "number of Fock levels M")->capture_default_str();
  auto* k = app.add_option("--series-k", c.series_k, "series truncation index K");
  auto* tail = app.add_option("--target-tail", c.target_tail, "choose the smallest K whose certified tail is below this")
                   ->capture_default_str();
  k->excludes(tail);
  app.add_option("--nphi", c.nphi, "grid points (0: command default)")->capture_default_str();
  app.add_option("--nr", c.nr, "Gauss-Jacobi radial nodes")->capture_default_str();
  app.add_option("--ntheta", c.ntheta, "angular nodes (even)")->capture_default_str();
  app.add_option("--psi", c.psi, "projector cut psi for fig3 (default phi0 + pi/2)");
  app.add_option("--rho", c.rho, "radii for fig2/fig3")->delimiter(',');
  app.add_option("--state", c.state, "n=<int> | z=<rho>@<theta> | alpha=<re>,<im> | file=<path>")->capture_default_str();
  app.add_option("--out", c.out, "output path (default stdout)");
  app.add_option("--seed", c.seed, "seed for random test states")->capture_default_str();
  app.add_flag("--deterministic", c.deterministic, "sequential evaluation (the only mode; kept for scripts)");
  app.add_flag("-v,--verbose", c.verbose, "print every check");
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitBadConfig;
  }

  try {
    return dispatch(c);
  } catch (const BoundViolation& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
}
