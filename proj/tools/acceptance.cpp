// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Pass criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "chemoflux/config.hpp"
#include "chemoflux/diagnostics.hpp"
#include "chemoflux/ledger.hpp"
#include "chemoflux/oracle.hpp"
#include "chemoflux/solver.hpp"

namespace cf = chemoflux;
namespace lg = chemoflux::ledger;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kMassDriftTol = 1e-12;
constexpr double kMaxCSlack = 1e-10;
constexpr int kMassSteps = 1000;
constexpr double kEnergyFactor = 100.0;
constexpr double kBoundedMultiple = 2.0;
constexpr double kPeriodicDivTol = 1e-10;
constexpr double kNeumannDivTol = 1e-8;
constexpr int kLedgerDensity = 100;

const fs::path kConfigDir = CHEMOFLUX_CONFIG_DIR;
const fs::path kCliPath = CHEMOFLUX_CLI_PATH;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

// The periodic divergence bound is checked on every accepted step of each
// periodic run below; the largest value seen is folded into criterion 7.
double g_periodic_div = 0.0;

cf::RunConfig energy_config(double alpha) {
  cf::RunConfig cfg = cf::parse_config(kConfigDir / "energy_alpha05.json");
  cfg.params.alpha = alpha;
  return cfg;
}

Outcome mass_and_positivity(bool want_mass) {
  static bool done = false;
  static Outcome mass, positivity;
  if (!done) {
    const cf::RunConfig cfg = energy_config(0.5);
    const cf::Integrator integrator(cfg.params, cfg.model);
    cf::FieldState s = cf::prepare_initial_state(cf::build_initial_state(cfg), integrator);
    const double m0 = cf::integrate(s.n);
    double drift = 0.0, min_n = s.n.min(), min_c = s.c.min(), worst_rise = 0.0;
    double prev_max_c = s.c.max();
    for (int k = 0; k < kMassSteps; ++k) {
      s = integrator.step(s, integrator.stable_dt(s));
      drift = std::max(drift, std::abs(cf::integrate(s.n) - m0) / m0);
      min_n = std::min(min_n, s.n.min());
      min_c = std::min(min_c, s.c.min());
      worst_rise = std::max(worst_rise, s.c.max() - prev_max_c);
      prev_max_c = s.c.max();
      g_periodic_div = std::max(g_periodic_div, cf::lp_norm(cf::divergence(s.u), std::numeric_limits<double>::infinity()));
    }
    mass.passed = drift <= kMassDriftTol;
    mass.detail = std::to_string(kMassSteps) + " steps to t = " + fmt("%.4f", s.t) + ", max relative drift " +
                  sci(drift) + " (tol " + sci(kMassDriftTol) + ")";
    positivity.passed = min_n >= 0.0 && min_c >= 0.0 && worst_rise <= kMaxCSlack;
    positivity.detail = "min n " + sci(min_n) + ", min c " + sci(min_c) + ", largest rise of max c " +
                        sci(worst_rise) + " (tol " + sci(kMaxCSlack) + ")";
    done = true;
  }
  return want_mass ? mass : positivity;
}

Outcome criterion_energy() {
  Outcome out{true, ""};
  for (double alpha : {0.2, 0.5, 1.2}) {
    const cf::RunConfig cfg = energy_config(alpha);
    const cf::RunResult r = cf::run(cfg.params, cfg.model, cf::build_initial_state(cfg), cf::make_schedule(cfg));
    g_periodic_div = std::max(g_periodic_div, r.max_div_residual);
    const double ceiling = kEnergyFactor * std::max(r.series.front().e_m, 1.0);
    const cf::WeakClassReport w = cf::weak_class_check(r.series, cfg.params, ceiling);
    out.passed = out.passed && w.passed() && r.final_state.t == cfg.params.t_final;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("a=") + fmt("%.1f", alpha) + ": E_M(0) " +
                  fmt("%.4g", r.series.front().e_m) + ", sup " + fmt("%.4g", w.sup_em) + ", finite " +
                  (w.finite ? "yes" : "no");
  }
  return out;
}

Outcome criterion_bounded() {
  const cf::RunConfig cfg = cf::parse_config(kConfigDir / "bounded_weak.json");
  const cf::RunResult r = cf::run(cfg.params, cfg.model, cf::build_initial_state(cfg), cf::make_schedule(cfg));
  g_periodic_div = std::max(g_periodic_div, r.max_div_residual);
  const cf::BoundedClassReport b = cf::bounded_class_check(r.series, cfg.params, kBoundedMultiple);
  const bool special_case = r.assumption.bounded_cases.count(cf::Clause::iii) > 0;
  return {b.passed && special_case && !b.fluid_warning,
          "max n0 " + fmt("%.5g", b.max_n0) + ", sup max n " + fmt("%.5g", b.sup_max_n) + " (limit " +
              fmt("%.5g", kBoundedMultiple * b.max_n0) + "), bounded cases " +
              cf::format_cases(r.assumption.bounded_cases)};
}

std::string series_summary(const cf::oracle::StudyResult& r) {
  std::string s;
  for (const auto& ser : r.series) {
    s += (s.empty() ? "" : "; ") + ser.label + ":";
    for (double e : ser.errors) s += " " + sci(e);
    if (!ser.orders.empty()) s += " (order " + fmt("%.2f", ser.orders.back()) + ")";
  }
  return s;
}

Outcome criterion_uniform() {
  const auto r = cf::oracle::run_uniform_study(cf::oracle::UniformStudySettings{});
  return {r.passed, series_summary(r)};
}

Outcome criterion_barenblatt() {
  const auto r = cf::oracle::run_barenblatt_study(cf::oracle::BarenblattStudySettings{});
  return {r.passed, series_summary(r)};
}

Outcome criterion_projection() {
  const cf::RunConfig cfg = cf::parse_config(kConfigDir / "neumann_2d.json");
  const cf::RunResult r = cf::run(cfg.params, cfg.model, cf::build_initial_state(cfg), cf::make_schedule(cfg));
  const bool periodic_ok = g_periodic_div <= kPeriodicDivTol;
  const bool neumann_ok = r.max_div_residual <= kNeumannDivTol;
  std::string detail = "neumann 64^2 max " + sci(r.max_div_residual) + " over " + std::to_string(r.steps) +
                       " steps (tol " + sci(kNeumannDivTol) + ")";
  if (g_periodic_div > 0.0)
    detail = "periodic max " + sci(g_periodic_div) + " (tol " + sci(kPeriodicDivTol) + "); " + detail;
  else
    detail = "periodic runs not selected; " + detail;
  return {periodic_ok && neumann_ok, detail};
}

Outcome criterion_ledger() {
  const auto catalog = lg::build_ledger();
  std::size_t points = 0;
  std::vector<std::string> failed;
  for (const auto& e : catalog) {
    const lg::ScanSummary s = lg::scan_region(e, kLedgerDensity);
    points += s.interior_points;
    const bool scaling_ok = !e.scaling || lg::scaling_check(e).passed;
    if (!s.all_interior_pass() || s.interior_points == 0 || !scaling_ok) failed.push_back(e.id);
  }
  auto value = [&](const char* id, const char* name, const lg::Rational& a, const lg::Rational& p) {
    const lg::CheckResult r = lg::check_entry(lg::find_entry(catalog, id), a, p);
    for (const auto& v : r.values)
      if (v.name == name && v.value && r.status == lg::Status::pass) return *v.value;
    return lg::Rational(-1);
  };
  const lg::Rational g = value("case-i-low-III", "(6-6a)/(2+3a)", lg::Rational(1, 3), lg::Rational(3, 2));
  const lg::Rational th5 = value("theta-5", "theta5", lg::Rational(1, 4), lg::Rational(3, 2));
  const bool exact = g == lg::Rational(4, 3) && th5 == lg::Rational(1, 6);
  std::string detail = std::to_string(catalog.size()) + " entries, " + std::to_string(points) +
                       " interior points; (6-6a)/(2+3a) at 1/3 = " + g.get_str() + ", theta5(1/4, 3/2) = " +
                       th5.get_str();
  for (const auto& id : failed) detail += "; failed " + id;
  return {failed.empty() && exact, detail};
}

Outcome criterion_classification() {
  struct Example {
    cf::ChiKappaModel model;
    double alpha;
    std::set<cf::Clause> expected;
  };
  using C = cf::Clause;
  const std::vector<Example> examples = {
      {{0.0, 1.0, 1.0, 1.0}, 0.2, {C::i, C::ii, C::iii}},
      {{1.0, 0.0, 1.0, 1.0}, 0.15, {C::iii}},
      {{1.0, 0.0, 1.0, 2.0}, 0.1, {}},
  };
  Outcome out{true, ""};
  for (const auto& ex : examples) {
    cf::SimParams p;
    p.alpha = ex.alpha;
    const cf::AssumptionCase a = cf::classify_assumption(ex.model, p, 1.0);
    out.passed = out.passed && a.weak_cases == ex.expected && a.bounded_cases == ex.expected;
    out.detail += (out.detail.empty() ? "" : "; ") + fmt("a=%.2f", ex.alpha) + " weak " +
                  cf::format_cases(a.weak_cases) + " bounded " + cf::format_cases(a.bounded_cases);
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("chemoflux_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> contents;
  for (int k = 0; k < 2; ++k) {
    const fs::path csv = dir / ("run" + std::to_string(k) + ".csv");
    const std::string cmd = "\"" + kCliPath.string() + "\" run \"" + (kConfigDir / "energy_alpha05.json").string() +
                            "\" --csv \"" + csv.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "CLI run " + std::to_string(k + 1) + " exited with an error"};
    }
    contents.push_back(slurp(csv));
  }
  fs::remove_all(dir);
  const bool same = !contents[0].empty() && contents[0] == contents[1];
  return {same, std::to_string(contents[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemoflux acceptance suite"};
  std::vector<int> selected;
  app.add_option("criteria", selected, "Criterion numbers to run (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"mass conservation", [] { return mass_and_positivity(true); }},
      {"positivity and max principle", [] { return mass_and_positivity(false); }},
      {"energy boundedness", criterion_energy},
      {"bounded-weak regime", criterion_bounded},
      {"uniform-state oracle", criterion_uniform},
      {"Barenblatt oracle", criterion_barenblatt},
      {"projection residual", criterion_projection},
      {"ledger exactness", criterion_ledger},
      {"assumption classification", criterion_classification},
      {"determinism", criterion_determinism},
  };
  const std::set<int> wanted(selected.begin(), selected.end());

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::printf("%s %2d  %-30s %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", number, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
