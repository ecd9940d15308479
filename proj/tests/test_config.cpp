#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "chemoflux/config.hpp"

using namespace chemoflux;

namespace {

const char* kMinimal = R"({
  "params": { "alpha": 0.5, "tau": 0, "t_final": 0.5 },
  "domain": { "dim": 2, "lengths": 4.0, "resolution": 16 },
  "initial": { "n": { "type": "constant", "value": 1.0 } }
})";

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, DefaultsForOptionalKeys) {
  const RunConfig c = parse_config_text(kMinimal);
  EXPECT_EQ(c.params.em_weight, 1.0);
  EXPECT_EQ(c.params.cfl_safety, 0.4);
  EXPECT_EQ(c.params.domain.mode, BoundaryMode::periodic);
  EXPECT_EQ(c.params.domain.lengths[1], 4.0);
  EXPECT_EQ(c.params.domain.resolution[1], 16);
  EXPECT_EQ(c.model.chi_offset, 1.0);
  EXPECT_EQ(c.model.chi_slope, 0.0);
  EXPECT_EQ(c.model.kappa_coeff, 1.0);
  EXPECT_EQ(c.model.kappa_power, 1.0);
  EXPECT_EQ(c.initial.c.type, "constant");
  EXPECT_EQ(c.initial.c.value, 1.0);
  EXPECT_EQ(c.initial.u.type, "zero");
  EXPECT_EQ(c.output.sample_count, 100);
  EXPECT_TRUE(c.output.diagnostics_csv.empty());
}

TEST(Config, ZeroAlphaIsRejectedWithTheConstraint) {
  std::string text = kMinimal;
  text.replace(text.find("0.5"), 3, "0");
  const auto p = problems_of(text);
  ASSERT_FALSE(p.empty());
  EXPECT_TRUE(mentions(p, "params.alpha"));
  EXPECT_TRUE(mentions(p, "alpha > 0"));
}

TEST(Config, TauMustBeZeroOrOne) {
  std::string text = kMinimal;
  text.replace(text.find("\"tau\": 0"), 8, "\"tau\": 2");
  const auto p = problems_of(text);
  EXPECT_TRUE(mentions(p, "params.tau: must be 0 (Stokes) or 1 (Navier-Stokes), got 2"));
}

TEST(Config, EveryProblemIsListed) {
  const auto p = problems_of(R"({
    "params": { "alpha": -1, "tau": 3, "t_final": 1, "bogus": 1 },
    "domain": { "dim": 2, "lengths": [1.0, 1.0], "resolution": [4, 16] },
    "initial": { "n": { "type": "spiral" } }
  })");
  EXPECT_GE(p.size(), 5u);
  EXPECT_TRUE(mentions(p, "params.alpha"));
  EXPECT_TRUE(mentions(p, "params.tau"));
  EXPECT_TRUE(mentions(p, "bogus"));
  EXPECT_TRUE(mentions(p, "resolution"));
  EXPECT_TRUE(mentions(p, "initial.n.type"));
}

TEST(Config, MissingRequiredKeys) {
  const auto p = problems_of(R"({ "params": { "tau": 0 }, "domain": { "dim": 2 } })");
  EXPECT_TRUE(mentions(p, "params.alpha"));
  EXPECT_TRUE(mentions(p, "params.t_final"));
  EXPECT_TRUE(mentions(p, "domain.lengths"));
  EXPECT_TRUE(mentions(p, "domain.resolution"));
  EXPECT_TRUE(mentions(p, "initial"));
}

TEST(Config, MalformedJson) {
  EXPECT_THROW(parse_config_text("{ not json"), ConfigError);
  EXPECT_THROW(parse_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ModelValidation) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "model": { "chi_offset": 0, "chi_slope": 0 })");
  EXPECT_TRUE(mentions(problems_of(text), "model"));
}

TEST(InitialState, GaussianBumpsCarryTheirMass) {
  const RunConfig c = parse_config_text(R"({
    "params": { "alpha": 0.5, "tau": 1, "t_final": 0.1 },
    "domain": { "dim": 2, "lengths": 4.0, "resolution": 32 },
    "initial": { "n": { "type": "gaussian_bumps", "background": 0.1,
                        "bumps": [ { "center": [0.5, 0], "sigma": 0.3, "mass": 2.0 },
                                   { "center": [-1, 1], "sigma": 0.2, "mass": 0.5 } ] } }
  })");
  const FieldState s = build_initial_state(c);
  EXPECT_NEAR(integrate(s.n), 2.5 + 0.1 * 16.0, 1e-12);
  EXPECT_GE(s.n.min(), 0.1 - 1e-15);
  EXPECT_TRUE((s.c.values() == 1.0).all());
}

TEST(InitialState, PerturbationIsSeededAndMassPreserving) {
  auto make = [](int seed) {
    return parse_config_text(R"({
      "params": { "alpha": 0.5, "tau": 1, "t_final": 0.1 },
      "domain": { "dim": 2, "lengths": 2.0, "resolution": 16 },
      "initial": { "seed": )" + std::to_string(seed) + R"(,
                   "n": { "type": "constant", "value": 1.0, "perturbation": 0.2 } }
    })");
  };
  const FieldState a = build_initial_state(make(3));
  const FieldState b = build_initial_state(make(3));
  const FieldState c = build_initial_state(make(4));
  EXPECT_TRUE((a.n.values() == b.n.values()).all());
  EXPECT_FALSE((a.n.values() == c.n.values()).all());
  EXPECT_NEAR(integrate(a.n), 4.0, 1e-12);
  EXPECT_GE(a.n.min(), 0.8 * 0.9);
}

TEST(InitialState, VorticesAreDivergenceFree) {
  for (const char* mode : {"periodic", "neumann"}) {
    const RunConfig c = parse_config_text(std::string(R"({
      "params": { "alpha": 0.5, "tau": 1, "t_final": 0.1 },
      "domain": { "dim": 2, "mode": ")") + mode + R"(", "lengths": [2.0, 3.0], "resolution": [32, 48] },
      "initial": { "n": { "type": "constant", "value": 1.0 }, "u": { "type": "vortex", "amplitude": 0.7 } }
    })");
    const FieldState s = build_initial_state(c);
    const double umax = s.u[0].values().abs().maxCoeff();
    EXPECT_NEAR(umax, 0.7, 0.05) << mode;
    // Central differences of a smooth solenoidal field: O(h^2) divergence.
    EXPECT_LT(lp_norm(divergence(s.u), std::numeric_limits<double>::infinity()), 0.05) << mode;
  }
}

TEST(Schedule, SampleCountAndExplicitTimes) {
  RunConfig c = parse_config_text(kMinimal);
  c.output.sample_count = 6;
  RunSchedule s = make_schedule(c);
  ASSERT_EQ(s.sample_times.size(), 6u);
  EXPECT_EQ(s.sample_times.back(), 0.5);
  c.output.sample_times = {0.0, 0.25};
  s = make_schedule(c);
  EXPECT_EQ(s.sample_times, (std::vector<double>{0.0, 0.25}));
}

TEST(Studies, SettingsAreReadFromTheStudySection) {
  const auto dir = std::filesystem::temp_directory_path() / "chemoflux_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "studies.json";
  std::ofstream(path) << R"({ "study": { "uniform": { "n_bar": 2.0, "time_steps": [0.01, 0.005] },
                                         "barenblatt": { "resolutions": [32, 64] } } })";
  const auto u = parse_uniform_study(path);
  EXPECT_EQ(u.n_bar, 2.0);
  EXPECT_EQ(u.time_steps, (std::vector<double>{0.01, 0.005}));
  EXPECT_EQ(u.c_bar, 1.0);
  EXPECT_EQ(parse_barenblatt_study(path).resolutions, (std::vector<int>{32, 64}));
  EXPECT_EQ(parse_manufactured_study(path).resolutions, (std::vector<int>{16, 32, 64}));
  std::filesystem::remove_all(dir);
}
