// Command-line front end: simulation runs, exponent ledger, oracle studies
// and assumption classification.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemoflux/config.hpp"
#include "chemoflux/diagnostics.hpp"
#include "chemoflux/error.hpp"
#include "chemoflux/ledger.hpp"
#include "chemoflux/oracle.hpp"
#include "chemoflux/solver.hpp"

namespace cf = chemoflux;
namespace lg = chemoflux::ledger;

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitError = 2;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void configure_threads(int requested) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("CHEMOFLUX_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
}

nlohmann::json assumption_json(const cf::RunResult& r) {
  nlohmann::json j;
  j["weak_cases"] = cf::format_cases(r.assumption.weak_cases);
  j["bounded_cases"] = cf::format_cases(r.assumption.bounded_cases);
  j["c_max"] = r.c_max;
  j["warning"] = r.assumption_warning;
  return j;
}

int cmd_run(const std::string& config_path, const std::string& csv_override) {
  const cf::RunConfig cfg = cf::parse_config(config_path);
  const cf::FieldState initial = cf::build_initial_state(cfg);
  const cf::RunResult result = cf::run(cfg.params, cfg.model, initial, cf::make_schedule(cfg));

  const std::filesystem::path csv = csv_override.empty() ? cfg.output.diagnostics_csv : std::filesystem::path(csv_override);
  const cf::WeakClassReport weak = cf::weak_class_check(result.series, cfg.params, cfg.output.ceiling);
  if (!csv.empty()) {
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream out(csv);
    if (!out) throw cf::Error("cannot write " + csv.string());
    cf::write_csv(out, result.series);
    nlohmann::json meta;
    meta["assumption"] = assumption_json(result);
    meta["steps"] = result.steps;
    meta["max_div_residual"] = result.max_div_residual;
    meta["weak_class_passed"] = weak.passed();
    std::ofstream(csv.string() + ".meta.json") << meta.dump(2) << "\n";
  }

  const auto& first = result.series.front();
  const auto& last = result.series.back();
  std::cout << "steps            " << result.steps << "\n"
            << "final time       " << num(result.final_state.t) << "\n"
            << "mass drift       " << num((last.mass - first.mass) / first.mass) << " (relative)\n"
            << "sup E_M          " << num(weak.sup_em) << "\n"
            << "int D dt         " << num(weak.d_integral) << "\n"
            << "max div residual " << num(result.max_div_residual) << "\n"
            << "assumption       weak " << cf::format_cases(result.assumption.weak_cases) << ", bounded "
            << cf::format_cases(result.assumption.bounded_cases) << "\n";
  if (result.assumption_warning)
    std::cout << "warning: no clause of either assumption holds for this model; the run is exploratory\n";
  if (!csv.empty()) std::cout << "diagnostics      " << csv.string() << "\n";
  if (!weak.passed()) {
    std::cout << "FAIL: ";
    if (!weak.finite) std::cout << "non-finite diagnostics from t = " << num(*weak.first_nonfinite_time) << "\n";
    else std::cout << "E_M exceeded the ceiling " << num(weak.ceiling) << " at t = " << num(*weak.ceiling_exceeded_time) << "\n";
    return kExitFailedCheck;
  }
  return 0;
}

int cmd_classify(const std::string& config_path) {
  const cf::RunConfig cfg = cf::parse_config(config_path);
  const cf::FieldState initial = cf::build_initial_state(cfg);
  const double c_max = std::max(initial.c.max(), 0.0);
  const cf::AssumptionCase a = cf::classify_assumption(cfg.model, cfg.params, c_max);
  std::cout << "weak " << cf::format_cases(a.weak_cases) << "\n"
            << "bounded " << cf::format_cases(a.bounded_cases) << "\n";
  if (a.chi_witness) std::cout << "chi' >= " << num(*a.chi_witness) << " on [0, " << num(c_max) << "]\n";
  if (a.kappa_witness) std::cout << "kappa' >= " << num(*a.kappa_witness) << " on [0, " << num(c_max) << "]\n";
  if (!a.any()) std::cout << "warning: no clause of either assumption holds\n";
  return 0;
}

std::string value_text(const std::optional<lg::Rational>& v) { return v ? cf::exact::to_string(*v) : "undefined"; }

int ledger_point(const std::vector<lg::LedgerEntry>& catalog, const std::string& entry_filter,
                 const std::string& alpha_text, const std::string& p_text, bool csv) {
  const lg::Rational alpha = cf::exact::parse_rational(alpha_text);
  const std::optional<lg::Rational> p = p_text.empty() ? std::nullopt : std::optional(cf::exact::parse_rational(p_text));
  int failures = 0;
  if (csv) std::cout << "entry,expression,value,bound,outcome,status\n";
  for (const auto& e : catalog) {
    if (!entry_filter.empty() && e.id != entry_filter) continue;
    if (e.box.uses_p && !p) {
      if (!csv) std::cout << e.id << "  skipped (needs --p)\n";
      continue;
    }
    const lg::CheckResult r = lg::check_entry(e, alpha, p.value_or(lg::Rational(0)));
    if (r.status == lg::Status::fail) ++failures;
    const std::string status = lg::to_string(r.status);
    if (csv) {
      for (const auto& b : r.bounds)
        std::cout << e.id << ",\"" << b.expression << "\"," << value_text(b.value) << ",\"" << b.bound << "\","
                  << (b.satisfied ? "pass" : "fail") << "," << status << "\n";
      for (const auto& i : r.identities)
        std::cout << e.id << ",\"" << i.name << "\",,identity," << (i.holds ? "pass" : "fail") << "," << status << "\n";
      continue;
    }
    std::cout << e.id << "  [" << e.region_text() << "]  " << status << "\n";
    for (const auto& v : r.values) std::cout << "    " << v.name << " = " << value_text(v.value) << "\n";
    for (const auto& b : r.bounds) std::cout << "    " << b.bound << "  " << (b.satisfied ? "pass" : "fail") << "\n";
    for (const auto& i : r.identities) std::cout << "    identity: " << i.name << "  " << (i.holds ? "pass" : "fail") << "\n";
  }
  return failures == 0 ? 0 : kExitFailedCheck;
}

int ledger_scan(const std::vector<lg::LedgerEntry>& catalog, const std::string& entry_filter, int density, bool csv) {
  bool ok = true;
  if (csv) std::cout << "entry,scaling,interior_points,interior_pass,collar_points,collar_inapplicable,collar_bound_violations\n";
  for (const auto& e : catalog) {
    if (!entry_filter.empty() && e.id != entry_filter) continue;
    const lg::ScalingResult sc = lg::scaling_check(e);
    const lg::ScanSummary s = lg::scan_region(e, density);
    const std::string scaling = sc.has_data ? (sc.passed ? "pass" : "fail") : "n/a";
    ok = ok && s.all_interior_pass() && (!sc.has_data || sc.passed);
    if (csv) {
      std::cout << e.id << "," << scaling << "," << s.interior_points << "," << s.interior_pass << "," << s.collar_points
                << "," << s.collar_inapplicable << "," << s.collar_bound_violations << "\n";
      continue;
    }
    std::cout << e.id << "  scaling " << scaling << "  interior " << s.interior_pass << "/" << s.interior_points
              << "  collar inapplicable " << s.collar_inapplicable << "/" << s.collar_points << " (bound violations "
              << s.collar_bound_violations << ")\n";
    for (const auto& f : s.interior_failures) {
      std::cout << "    counterexample alpha = " << cf::exact::to_string(f.alpha) << ", p = " << cf::exact::to_string(f.p)
                << ":";
      for (const auto& what : f.failed) std::cout << " [" << what << "]";
      std::cout << "\n";
    }
    for (const auto& r : s.ranges)
      if (r.min && r.max)
        std::cout << "    " << r.name << " in [" << num(r.min->get_d()) << ", " << num(r.max->get_d()) << "]\n";
    for (const auto& n : e.notes) std::cout << "    note: " << n << "\n";
  }
  return ok ? 0 : kExitFailedCheck;
}

int ledger_list(const std::vector<lg::LedgerEntry>& catalog) {
  for (const auto& e : catalog) std::cout << e.id << "  [" << e.region_text() << "]\n    " << e.description << "\n";
  return 0;
}

int cmd_oracle(const std::string& name, const std::string& config_path) {
  cf::oracle::StudyResult r;
  if (name == "uniform")
    r = cf::oracle::run_uniform_study(cf::parse_uniform_study(config_path));
  else if (name == "barenblatt")
    r = cf::oracle::run_barenblatt_study(cf::parse_barenblatt_study(config_path));
  else if (name == "manufactured")
    r = cf::oracle::run_manufactured_study(cf::parse_manufactured_study(config_path));
  else
    throw cf::InvalidArgument("unknown oracle study '" + name + "' (expected uniform, barenblatt or manufactured)");
  std::cout << cf::oracle::format_study(r);
  return r.passed ? 0 : kExitFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Porous-medium Keller-Segel-Navier-Stokes simulator and verification tools"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (falls back to CHEMOFLUX_THREADS)");

  std::string config_path, csv_override;
  auto* run = app.add_subcommand("run", "Simulate a configuration and write diagnostics");
  run->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--csv", csv_override, "Diagnostics CSV path (overrides output.diagnostics_csv)");

  std::string alpha_text, p_text, entry_filter;
  int density = 0;
  bool csv = false;
  auto* ledger = app.add_subcommand("ledger", "Exact verification of the exponent catalog");
  ledger->add_option("--alpha", alpha_text, "alpha as an exact rational, e.g. 1/3");
  ledger->add_option("--p", p_text, "p as an exact rational");
  auto* scan = ledger->add_option("--scan", density, "Lattice density for a region scan")->check(CLI::Range(2, 10000));
  ledger->add_option("--entry", entry_filter, "Restrict to one catalog entry");
  ledger->add_flag("--csv", csv, "CSV output");
  ledger->get_option("--alpha")->excludes(scan);
  ledger->get_option("--p")->needs(ledger->get_option("--alpha"));

  std::string study, study_config;
  auto* oracle = app.add_subcommand("oracle", "Run a verification study (uniform, barenblatt, manufactured)");
  oracle->add_option("name", study, "Study name")->required();
  oracle->add_option("config", study_config, "JSON file with an optional study section")->check(CLI::ExistingFile);

  auto* classify = app.add_subcommand("classify", "Print which assumption clauses hold");
  classify->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  configure_threads(threads);

  try {
    if (run->parsed()) return cmd_run(config_path, csv_override);
    if (classify->parsed()) return cmd_classify(config_path);
    if (oracle->parsed()) return cmd_oracle(study, study_config);
    if (ledger->parsed()) {
      const auto catalog = lg::build_ledger();
      if (!entry_filter.empty()) lg::find_entry(catalog, entry_filter);
      if (density > 0) return ledger_scan(catalog, entry_filter, density, csv);
      if (!alpha_text.empty()) return ledger_point(catalog, entry_filter, alpha_text, p_text, csv);
      return ledger_list(catalog);
    }
  } catch (const cf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const cf::InstabilityError& e) {
    std::cerr << "FAIL: " << e.what() << "\n";
    return kExitFailedCheck;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
