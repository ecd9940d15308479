#include "chemoflux/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chemoflux/error.hpp"
#include "chemoflux/snapshot.hpp"

namespace chemoflux {

using nlohmann::json;

namespace {

using Problems = std::vector<std::string>;

/// Typed access to one JSON object that records problems instead of throwing
/// and remembers which keys were consumed, so leftovers can be reported.
class Section {
 public:
  Section(const json* node, std::string name, Problems& problems)
      : node_(node), name_(std::move(name)), problems_(&problems) {
    if (node_ && !node_->is_object()) {
      problems_->push_back(name_ + ": expected an object");
      node_ = nullptr;
    }
  }

  bool present() const { return node_ != nullptr; }
  Problems& problems() { return *problems_; }
  const std::string& name() const { return name_; }
  std::string key_path(const std::string& key) const { return name_ + "." + key; }

  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  void problem(const std::string& key, const std::string& what) { problems_->push_back(key_path(key) + ": " + what); }

  std::optional<double> number(const std::string& key, bool required = false) {
    const json* v = raw(key);
    if (!v) {
      if (required && node_) problem(key, "required key is missing");
      return std::nullopt;
    }
    if (!v->is_number()) {
      problem(key, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  double number_or(const std::string& key, double fallback) { return number(key).value_or(fallback); }

  std::optional<long long> integer(const std::string& key, bool required = false) {
    const json* v = raw(key);
    if (!v) {
      if (required && node_) problem(key, "required key is missing");
      return std::nullopt;
    }
    if (!v->is_number_integer()) {
      problem(key, "expected an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::string> string(const std::string& key, bool required = false) {
    const json* v = raw(key);
    if (!v) {
      if (required && node_) problem(key, "required key is missing");
      return std::nullopt;
    }
    if (!v->is_string()) {
      problem(key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      problem(key, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number()) {
        problem(key, "expected an array of numbers");
        return std::nullopt;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::optional<std::vector<int>> integers(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      problem(key, "expected an array of integers");
      return std::nullopt;
    }
    std::vector<int> out;
    for (const auto& x : *v) {
      if (!x.is_number_integer()) {
        problem(key, "expected an array of integers");
        return std::nullopt;
      }
      out.push_back(x.get<int>());
    }
    return out;
  }

  Section child(const std::string& key, bool required = false) {
    const json* v = raw(key);
    if (!v && required && node_) problem(key, "required section is missing");
    return Section(v, key_path(key), *problems_);
  }

  /// Reports keys that were never read.
  void finish() const {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!seen_.count(it.key())) problems_->push_back(key_path(it.key()) + ": unknown key");
  }

 private:
  const json* node_;
  std::string name_;
  Problems* problems_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

// Scalar or per-axis array.
template <typename T>
std::array<T, 3> per_axis(Section& s, const std::string& key, int dim, std::array<T, 3> fallback) {
  const json* v = s.raw(key);
  if (!v) {
    if (s.present()) s.problem(key, "required key is missing");
    return fallback;
  }
  std::array<T, 3> out = fallback;
  auto accept = [](const json& x) { return std::is_integral_v<T> ? x.is_number_integer() : x.is_number(); };
  if (accept(*v)) {
    for (int a = 0; a < 3; ++a) out[a] = v->get<T>();
    return out;
  }
  if (!v->is_array() || static_cast<int>(v->size()) != dim) {
    s.problem(key, "expected a number or an array with one entry per dimension (" + std::to_string(dim) + ")");
    return fallback;
  }
  for (int a = 0; a < dim; ++a) {
    if (!accept((*v)[a])) {
      s.problem(key, "entries must be numeric");
      return fallback;
    }
    out[a] = (*v)[a].get<T>();
  }
  return out;
}

void parse_model(Section s, ChiKappaModel& m, Problems& problems) {
  if (!s.present()) return;
  m.chi_offset = s.number_or("chi_offset", m.chi_offset);
  m.chi_slope = s.number_or("chi_slope", m.chi_slope);
  m.kappa_coeff = s.number_or("kappa_coeff", m.kappa_coeff);
  m.kappa_power = s.number_or("kappa_power", m.kappa_power);
  s.finish();
  try {
    m.validate();
  } catch (const InvalidArgument& e) {
    problems.push_back(s.name() + ": " + e.what());
  }
}

void parse_params(Section s, SimParams& p) {
  if (auto v = s.number("alpha", true)) {
    p.alpha = *v;
    if (!(p.alpha > 0.0)) s.problem("alpha", "must satisfy alpha > 0");
  }
  if (auto v = s.integer("tau", true)) {
    if (*v != 0 && *v != 1)
      s.problem("tau", "must be 0 (Stokes) or 1 (Navier-Stokes), got " + std::to_string(*v));
    else
      p.tau = static_cast<int>(*v);
  }
  if (auto v = s.number("t_final", true)) {
    p.t_final = *v;
    if (!(p.t_final >= 0.0) || !std::isfinite(p.t_final)) s.problem("t_final", "must be finite and >= 0");
  }
  if (auto v = s.number("rho")) {
    p.rho = *v;
    if (!(p.rho > 0.0 && p.rho < 1.0)) s.problem("rho", "must lie in (0, 1)");
  }
  if (auto v = s.number("em_weight")) {
    p.em_weight = *v;
    if (!(p.em_weight > 0.0)) s.problem("em_weight", "must be > 0");
  }
  if (auto v = s.number("cfl_safety")) {
    p.cfl_safety = *v;
    if (!(p.cfl_safety > 0.0 && p.cfl_safety <= 1.0)) s.problem("cfl_safety", "must lie in (0, 1]");
  }
  if (auto v = s.number("dt_max")) {
    p.dt_max = *v;
    if (!(p.dt_max > 0.0)) s.problem("dt_max", "must be > 0");
  }
  if (auto v = s.numbers("phi_gradient")) {
    if (v->size() != static_cast<std::size_t>(p.domain.dim))
      s.problem("phi_gradient", "expected " + std::to_string(p.domain.dim) + " components");
    else
      for (std::size_t a = 0; a < v->size(); ++a) p.phi_gradient[a] = (*v)[a];
  }
  s.finish();
}

void parse_domain(Section s, DomainSpec& d) {
  if (auto v = s.integer("dim", true)) {
    if (*v < 1 || *v > 3)
      s.problem("dim", "must be 1, 2 or 3");
    else
      d.dim = static_cast<int>(*v);
  }
  if (auto v = s.string("mode")) {
    if (*v == "periodic")
      d.mode = BoundaryMode::periodic;
    else if (*v == "neumann")
      d.mode = BoundaryMode::neumann;
    else
      s.problem("mode", "must be \"periodic\" or \"neumann\"");
  }
  d.lengths = per_axis<double>(s, "lengths", d.dim, d.lengths);
  d.resolution = per_axis<int>(s, "resolution", d.dim, d.resolution);
  for (int a = d.dim; a < 3; ++a) {
    d.lengths[a] = 1.0;
    d.resolution[a] = 1;
  }
  for (int a = 0; a < d.dim; ++a) {
    if (!(d.lengths[a] > 0.0) || !std::isfinite(d.lengths[a])) s.problem("lengths", "every length must be positive");
    if (d.resolution[a] < 8) s.problem("resolution", "every resolution must be >= 8");
  }
  if (d.mode == BoundaryMode::neumann && d.dim < 2) s.problem("mode", "neumann mode requires dim >= 2");
  s.finish();
}

void parse_scalar_init(Section s, ScalarInit& f, const std::filesystem::path& base, int dim) {
  if (!s.present()) return;
  if (auto t = s.string("type", true)) f.type = *t;
  if (f.type == "constant") {
    if (auto v = s.number("value", true)) f.value = *v;
  } else if (f.type == "gaussian_bumps") {
    f.background = s.number_or("background", 0.0);
    const json* bumps = s.raw("bumps");
    if (!bumps || !bumps->is_array() || bumps->empty()) {
      s.problem("bumps", "expected a non-empty array of bumps");
    } else {
      for (std::size_t i = 0; i < bumps->size(); ++i) {
        Section b(&(*bumps)[i], s.key_path("bumps[" + std::to_string(i) + "]"), s.problems());
        GaussianBump g;
        if (auto c = b.numbers("center")) {
          if (c->size() != static_cast<std::size_t>(dim))
            b.problem("center", "expected " + std::to_string(dim) + " coordinates");
          else
            for (int a = 0; a < dim; ++a) g.center[a] = (*c)[a];
        }
        g.sigma = b.number_or("sigma", g.sigma);
        g.mass = b.number_or("mass", g.mass);
        if (!(g.sigma > 0.0)) b.problem("sigma", "must be > 0");
        if (!(g.mass > 0.0)) b.problem("mass", "must be > 0");
        b.finish();
        f.bumps.push_back(g);
      }
    }
  } else if (f.type == "snapshot") {
    if (auto p = s.string("path", true)) f.path = resolve(base, *p);
  } else {
    s.problem("type", "must be \"constant\", \"gaussian_bumps\" or \"snapshot\"");
  }
  f.perturbation = s.number_or("perturbation", 0.0);
  if (!(f.perturbation >= 0.0 && f.perturbation < 1.0)) s.problem("perturbation", "must lie in [0, 1)");
  if (f.type == "constant" && f.value < 0.0) s.problem("value", "must be >= 0");
  if (f.background < 0.0) s.problem("background", "must be >= 0");
  s.finish();
}

void parse_velocity_init(Section s, VelocityInit& u, const std::filesystem::path& base, const DomainSpec& d) {
  if (!s.present()) return;
  if (auto t = s.string("type", true)) u.type = *t;
  if (u.type == "vortex") {
    u.amplitude = s.number_or("amplitude", u.amplitude);
    if (d.dim < 2) s.problem("type", "a vortex requires dim >= 2");
  } else if (u.type == "snapshot") {
    const json* paths = s.raw("paths");
    if (!paths || !paths->is_array() || static_cast<int>(paths->size()) != d.dim) {
      s.problem("paths", "expected one snapshot path per velocity component");
    } else {
      for (const auto& p : *paths) {
        if (!p.is_string()) {
          s.problem("paths", "entries must be strings");
          break;
        }
        u.paths.push_back(resolve(base, p.get<std::string>()));
      }
    }
  } else if (u.type != "zero") {
    s.problem("type", "must be \"zero\", \"vortex\" or \"snapshot\"");
  }
  s.finish();
}

void check_times(Section& s, const std::string& key, const std::vector<double>& times, double t_final) {
  for (double t : times)
    if (!(t >= 0.0 && t <= t_final)) {
      s.problem(key, "every time must lie in [0, t_final]");
      return;
    }
}

void parse_output(Section s, OutputSpec& o, const std::filesystem::path& base, double t_final) {
  if (!s.present()) return;
  if (auto v = s.string("diagnostics_csv")) o.diagnostics_csv = resolve(base, *v);
  if (auto v = s.integer("sample_count")) {
    if (*v < 1)
      s.problem("sample_count", "must be >= 1");
    else
      o.sample_count = static_cast<int>(*v);
  }
  if (auto v = s.numbers("sample_times")) {
    o.sample_times = *v;
    check_times(s, "sample_times", o.sample_times, t_final);
  }
  if (auto v = s.numbers("snapshot_times")) {
    o.snapshot_times = *v;
    check_times(s, "snapshot_times", o.snapshot_times, t_final);
  }
  if (auto v = s.string("snapshot_dir")) o.snapshot_dir = resolve(base, *v);
  if (!o.snapshot_times.empty() && o.snapshot_dir.empty())
    s.problem("snapshot_times", "snapshot_dir is required when snapshot times are given");
  if (auto v = s.number("ceiling")) {
    o.ceiling = *v;
    if (!(o.ceiling > 0.0)) s.problem("ceiling", "must be > 0");
  }
  s.finish();
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open " + path.string()});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": malformed JSON: " + e.what()});
  }
}

ScalarField build_scalar(const ScalarInit& f, const DomainSpec& spec, std::uint64_t seed, std::uint64_t stream,
                         const std::string& name) {
  ScalarField out(spec);
  if (f.type == "constant") {
    out.values().setConstant(f.value);
  } else if (f.type == "gaussian_bumps") {
    out.values().setConstant(f.background);
    for (const auto& b : f.bumps) {
      ScalarField g = sample(spec, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < spec.dim; ++a) r2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
        return std::exp(-r2 / (2.0 * b.sigma * b.sigma));
      });
      const double total = integrate(g);
      if (!(total > 0.0)) throw ConfigError({"initial." + name + ": a bump lies entirely outside the grid"});
      out.values() += g.values() * (b.mass / total);
    }
  } else {
    SnapshotMeta meta;
    out = read_snapshot(f.path, &meta);
    if (!(meta.spec == spec))
      throw ConfigError({"initial." + name + ": snapshot " + f.path.string() + " was written on a different grid"});
  }
  if (f.perturbation > 0.0) {
    const double before = integrate(out);
    std::mt19937_64 gen(seed * 4 + stream);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= 1.0 + f.perturbation * noise(gen);
    const double after = integrate(out);
    if (after > 0.0) out.values() *= before / after;
  }
  return out;
}

VecField build_velocity(const VelocityInit& u, const DomainSpec& spec) {
  VecField out(spec);
  if (u.type == "zero") return out;
  if (u.type == "snapshot") {
    for (int a = 0; a < spec.dim; ++a) {
      SnapshotMeta meta;
      out[a] = read_snapshot(u.paths[a], &meta);
      if (!(meta.spec == spec))
        throw ConfigError({"initial.u: snapshot " + u.paths[a].string() + " was written on a different grid"});
    }
    return out;
  }
  const double pi = std::numbers::pi;
  const double A = u.amplitude;
  if (spec.mode == BoundaryMode::periodic) {
    const double kx = 2.0 * pi / spec.lengths[0], ky = 2.0 * pi / spec.lengths[1];
    const double kz = spec.dim == 3 ? 2.0 * pi / spec.lengths[2] : 0.0;
    out[0] = sample(spec, [&](const auto& x) { return A * std::sin(kx * x[0]) * std::cos(ky * x[1]) * std::cos(kz * x[2]); });
    out[1] = sample(spec, [&](const auto& x) {
      return -A * (kx / ky) * std::cos(kx * x[0]) * std::sin(ky * x[1]) * std::cos(kz * x[2]);
    });
  } else {
    // psi = B sin^2(pi x/Lx) sin^2(pi y/Ly), u = (d_y psi, -d_x psi); max |u_x| = A.
    const double Lx = spec.lengths[0], Ly = spec.lengths[1];
    const double B = A * Ly / pi;
    out[0] = sample(spec, [&](const auto& x) {
      const double s = std::sin(pi * x[0] / Lx);
      return B * s * s * (pi / Ly) * std::sin(2.0 * pi * x[1] / Ly);
    });
    out[1] = sample(spec, [&](const auto& x) {
      const double s = std::sin(pi * x[1] / Ly);
      return -B * (pi / Lx) * std::sin(2.0 * pi * x[0] / Lx) * s * s;
    });
  }
  return out;
}

json study_section(const std::filesystem::path& path, const std::string& name) {
  if (path.empty()) return json::object();
  const json doc = read_json(path);
  if (!doc.contains("study")) return json::object();
  const json& s = doc["study"];
  if (!s.is_object()) throw ConfigError({"study: expected an object"});
  return s.contains(name) ? s[name] : json::object();
}

void throw_if(const Problems& problems) {
  if (!problems.empty()) throw ConfigError(problems);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  Problems problems;
  Section root(&doc, "config", problems);
  if (!root.present()) throw_if(problems);

  RunConfig cfg;
  cfg.model = ChiKappaModel{1.0, 0.0, 1.0, 1.0};
  // Domain first: array lengths elsewhere depend on dim.
  parse_domain(root.child("domain", true), cfg.params.domain);
  parse_params(root.child("params", true), cfg.params);
  parse_model(root.child("model"), cfg.model, problems);

  Section init = root.child("initial", true);
  if (auto seed = init.integer("seed")) {
    if (*seed < 0)
      init.problem("seed", "must be >= 0");
    else
      cfg.initial.seed = static_cast<std::uint64_t>(*seed);
  }
  cfg.initial.c.value = 1.0;
  parse_scalar_init(init.child("n", init.present()), cfg.initial.n, base_dir, cfg.params.domain.dim);
  parse_scalar_init(init.child("c"), cfg.initial.c, base_dir, cfg.params.domain.dim);
  parse_velocity_init(init.child("u"), cfg.initial.u, base_dir, cfg.params.domain);
  init.finish();

  parse_output(root.child("output"), cfg.output, base_dir, cfg.params.t_final);
  root.raw("study");  // consumed by the oracle subcommand
  root.finish();
  throw_if(problems);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config_text(ss.str(), path.parent_path());
  cfg.source = path;
  return cfg;
}

FieldState build_initial_state(const RunConfig& config) {
  const DomainSpec& spec = config.params.domain;
  FieldState s(spec, 0.0);
  s.n = build_scalar(config.initial.n, spec, config.initial.seed, 0, "n");
  s.c = build_scalar(config.initial.c, spec, config.initial.seed, 1, "c");
  s.u = build_velocity(config.initial.u, spec);
  return s;
}

RunSchedule make_schedule(const RunConfig& config) {
  RunSchedule s;
  s.sample_times = config.output.sample_times.empty()
                       ? evenly_spaced_times(config.params.t_final, config.output.sample_count)
                       : config.output.sample_times;
  s.snapshot_times = config.output.snapshot_times;
  s.snapshot_dir = config.output.snapshot_dir;
  return s;
}

oracle::UniformStudySettings parse_uniform_study(const std::filesystem::path& path) {
  const json node = study_section(path, "uniform");
  Problems problems;
  Section s(&node, "study.uniform", problems);
  oracle::UniformStudySettings out;
  out.n_bar = s.number_or("n_bar", out.n_bar);
  out.c_bar = s.number_or("c_bar", out.c_bar);
  out.alpha = s.number_or("alpha", out.alpha);
  out.t_final = s.number_or("t_final", out.t_final);
  out.tolerance = s.number_or("tolerance", out.tolerance);
  out.min_order = s.number_or("min_order", out.min_order);
  if (auto v = s.numbers("time_steps")) out.time_steps = *v;
  parse_model(s.child("model"), out.model, problems);
  if (out.n_bar < 0.0 || out.c_bar < 0.0) s.problem("n_bar", "uniform values must be >= 0");
  if (out.time_steps.size() < 2) s.problem("time_steps", "need at least two steps");
  s.finish();
  throw_if(problems);
  return out;
}

oracle::BarenblattStudySettings parse_barenblatt_study(const std::filesystem::path& path) {
  const json node = study_section(path, "barenblatt");
  Problems problems;
  Section s(&node, "study.barenblatt", problems);
  oracle::BarenblattStudySettings out;
  out.alpha = s.number_or("alpha", out.alpha);
  out.mass = s.number_or("mass", out.mass);
  out.length = s.number_or("length", out.length);
  out.t_start = s.number_or("t_start", out.t_start);
  out.t_end = s.number_or("t_end", out.t_end);
  out.rho = s.number_or("rho", out.rho);
  if (auto v = s.integers("resolutions")) out.resolutions = *v;
  if (out.resolutions.size() < 2) s.problem("resolutions", "need at least two resolutions");
  s.finish();
  throw_if(problems);
  return out;
}

oracle::ManufacturedStudySettings parse_manufactured_study(const std::filesystem::path& path) {
  const json node = study_section(path, "manufactured");
  Problems problems;
  Section s(&node, "study.manufactured", problems);
  oracle::ManufacturedStudySettings out = oracle::default_manufactured_settings();
  auto& p = out.problem.params;
  p.alpha = s.number_or("alpha", p.alpha);
  p.rho = s.number_or("rho", p.rho);
  p.cfl_safety = s.number_or("cfl_safety", p.cfl_safety);
  if (auto v = s.integer("tau")) p.tau = static_cast<int>(*v);
  if (auto v = s.numbers("phi_gradient")) {
    if (v->size() > 3)
      s.problem("phi_gradient", "at most three components");
    else
      for (std::size_t a = 0; a < v->size(); ++a) p.phi_gradient[a] = (*v)[a];
  }
  out.problem.n_amplitude = s.number_or("n_amplitude", out.problem.n_amplitude);
  out.problem.c_amplitude = s.number_or("c_amplitude", out.problem.c_amplitude);
  out.problem.u_amplitude = s.number_or("u_amplitude", out.problem.u_amplitude);
  if (auto v = s.integer("dim")) out.dim = static_cast<int>(*v);
  out.t_final = s.number_or("t_final", out.t_final);
  out.min_order = s.number_or("min_order", out.min_order);
  if (auto v = s.integers("resolutions")) out.resolutions = *v;
  parse_model(s.child("model"), out.problem.model, problems);
  if (out.dim != 2 && out.dim != 3) s.problem("dim", "must be 2 or 3");
  if (out.resolutions.size() < 2) s.problem("resolutions", "need at least two resolutions");
  if (!(out.problem.n_amplitude < 1.0)) s.problem("n_amplitude", "must be < 1 to keep n positive");
  s.finish();
  throw_if(problems);
  return out;
}

}  // namespace chemoflux
