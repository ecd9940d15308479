#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "chemoflux/diagnostics.hpp"

using namespace chemoflux;

namespace {

constexpr double kE = std::numbers::e;

SimParams params_for(BoundaryMode mode, int dim, int n, double length) {
  SimParams p;
  p.alpha = 0.5;
  p.domain.dim = dim;
  p.domain.mode = mode;
  p.domain.lengths = {length, length, length};
  p.domain.resolution = {n, n, n};
  return p;
}

ScalarField random_field(const DomainSpec& spec, unsigned seed, double lo, double hi) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  ScalarField f(spec);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = u(gen);
  return f;
}

FieldState random_state(const SimParams& p, unsigned seed) {
  FieldState s(p.domain);
  s.n = random_field(p.domain, seed, 0.0, 2.0);
  s.c = random_field(p.domain, seed + 1, 0.1, 1.0);
  for (int a = 0; a < p.domain.dim; ++a) s.u[a] = random_field(p.domain, seed + 2 + a, -1.0, 1.0);
  return s;
}

}  // namespace

TEST(Entropy, ReferenceValues) {
  const DomainSpec spec = params_for(BoundaryMode::periodic, 2, 8, 2.0).domain;
  EXPECT_EQ(entropy(ScalarField(spec, 0.0)).signed_value, 0.0);
  EXPECT_EQ(entropy(ScalarField(spec, 1.0)).signed_value, 0.0);
  const EntropyValues e = entropy(ScalarField(spec, kE));
  EXPECT_NEAR(e.signed_value, 4.0 * kE, 1e-12);
  EXPECT_NEAR(e.absolute_value, 4.0 * kE, 1e-12);
  const EntropyValues half = entropy(ScalarField(spec, 0.5));
  EXPECT_NEAR(half.signed_value, -half.absolute_value, 1e-15);
}

TEST(Entropy, AbsoluteDominatesSigned) {
  const DomainSpec spec = params_for(BoundaryMode::neumann, 2, 16, 1.0).domain;
  const EntropyValues e = entropy(random_field(spec, 4, 0.0, 3.0));
  EXPECT_GE(e.absolute_value, e.signed_value);
  EXPECT_GE(e.absolute_value, std::abs(e.signed_value));
}

TEST(Entropy, RejectsNegativeDensity) {
  const DomainSpec spec = params_for(BoundaryMode::periodic, 2, 8, 1.0).domain;
  ScalarField n(spec, 1.0);
  n[5] = -1e-6;
  EXPECT_THROW(entropy(n), InvalidArgument);
  n[5] = -1e-15;
  EXPECT_NO_THROW(entropy(n));
}

TEST(Moment, ZeroAndCenteredSpike) {
  const DomainSpec spec = params_for(BoundaryMode::periodic, 3, 9, 3.0).domain;
  EXPECT_EQ(weighted_moment(ScalarField(spec, 0.0)), 0.0);
  ScalarField spike(spec);
  spike[Layout(spec).index(4, 4, 4)] = 1.0 / spec.cell_volume();
  EXPECT_NEAR(weighted_moment(spike), 1.0, 1e-14);
}

TEST(Moment, MidpointQuadratureOfTheWeight) {
  // int_{-a}^{a} sqrt(1 + x^2) dx = a sqrt(1 + a^2) + asinh(a)
  const DomainSpec spec = params_for(BoundaryMode::periodic, 1, 512, 4.0).domain;
  const double a = 2.0;
  const double exact = a * std::sqrt(1.0 + a * a) + std::asinh(a);
  EXPECT_NEAR(weighted_moment(ScalarField(spec, 1.0)), exact, 1e-5);
}

TEST(Moment, UndefinedInNeumannMode) {
  const DomainSpec spec = params_for(BoundaryMode::neumann, 2, 8, 1.0).domain;
  EXPECT_THROW(weighted_moment(ScalarField(spec, 1.0)), UnsupportedMode);
}

TEST(Energy, UnitDensityAtRest) {
  const SimParams p = params_for(BoundaryMode::periodic, 3, 8, 2.0);
  FieldState s(p.domain);
  s.n.values().setConstant(1.0);
  s.c.values().setConstant(0.4);
  EXPECT_NEAR(energy_EM(s, p), 2.0 * weighted_moment(s.n) + p.domain.volume(), 1e-12);
}

TEST(Energy, AffineInTheFluidWeight) {
  SimParams p = params_for(BoundaryMode::periodic, 2, 16, 2.0);
  const FieldState s = random_state(p, 10);
  p.em_weight = 1.0;
  const double e1 = energy_EM(s, p);
  p.em_weight = 3.0;
  const double e3 = energy_EM(s, p);
  p.em_weight = 5.0;
  const double e5 = energy_EM(s, p);
  EXPECT_NEAR(e3 - e1, l2_norm_squared(s.u), 1e-12 * e3);
  EXPECT_NEAR(e5 - e3, e3 - e1, 1e-12 * e5);
}

TEST(Energy, NeumannModeDropsTheMoment) {
  const SimParams p = params_for(BoundaryMode::neumann, 2, 8, 1.0);
  FieldState s(p.domain);
  s.n.values().setConstant(1.0);
  EXPECT_NEAR(energy_EM(s, p), 1.0, 1e-14);
}

TEST(Energy, AbsoluteEntropyIsControlledByTheMoment) {
  // n|log n| = n log n + 2 n log(1/n) on {n < 1}, and n log(1/n) is at most
  // n<x> where n > exp(-<x>) and at most (2/e) exp(-<x>/2) elsewhere.
  const SimParams p = params_for(BoundaryMode::periodic, 2, 32, 6.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    const ScalarField n = random_field(p.domain, seed, 0.0, 1.5);
    const EntropyValues e = entropy(n);
    const ScalarField tail = sample(p.domain, [](const auto& x) {
      return std::exp(-0.5 * std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1]));
    });
    const double bound = e.signed_value + 2.0 * weighted_moment(n) + (4.0 / kE) * integrate(tail);
    EXPECT_LE(e.absolute_value, bound);
  }
}

TEST(Dissipation, ZeroStateAndConstantDensity) {
  const SimParams p = params_for(BoundaryMode::periodic, 2, 16, 2.0);
  EXPECT_EQ(dissipation_D(FieldState(p.domain), p), 0.0);
  FieldState s(p.domain);
  s.n.values().setConstant(1.3);
  s.c = random_field(p.domain, 3, 0.0, 1.0);
  const ScalarField lap = laplacian(s.c);
  EXPECT_NEAR(dissipation_D(s, p), integrate(ScalarField(p.domain, lap.values().square())), 1e-10);
}

TEST(Record, ComponentsRebuildTheEnergy) {
  for (auto mode : {BoundaryMode::periodic, BoundaryMode::neumann}) {
    const SimParams p = params_for(mode, 2, 16, 2.0);
    const DiagnosticsRecord r = compute_record(random_state(p, 20), p);
    EXPECT_NEAR(recompute_em(r, p), r.e_m, 1e-12 * r.e_m);
    EXPECT_EQ(std::isnan(r.moment), mode == BoundaryMode::neumann);
    EXPECT_EQ(r.d_accum, 0.0);
    EXPECT_GE(r.abs_entropy, r.entropy);
  }
}

TEST(Record, MonitoredNormsAreOrderedByExponent) {
  const auto ps = monitored_exponents(0.25);
  EXPECT_EQ(ps[0], 1.0);
  EXPECT_EQ(ps[1], 1.25);
  EXPECT_EQ(ps[2], 2.0);
  EXPECT_EQ(ps[3], 1.5);
  EXPECT_TRUE(std::isinf(ps[4]));
}

TEST(Record, TrapezoidalAccumulation) {
  const SimParams p = params_for(BoundaryMode::periodic, 2, 16, 2.0);
  FieldState s = random_state(p, 30);
  const DiagnosticsRecord r0 = compute_record(s, p);
  s.t = 0.5;
  s.c = random_field(p.domain, 77, 0.0, 1.0);
  const DiagnosticsRecord r1 = compute_record(s, p, &r0);
  EXPECT_NEAR(r1.d_accum, 0.25 * (r0.d + r1.d), 1e-12 * r1.d_accum);
}

TEST(WeakClass, FlagsCeilingAndNonFiniteRecords) {
  const SimParams p = params_for(BoundaryMode::periodic, 2, 16, 2.0);
  FieldState s = random_state(p, 40);
  std::vector<DiagnosticsRecord> series{compute_record(s, p)};
  s.t = 1.0;
  s.n.values() *= 2.0;
  series.push_back(compute_record(s, p, &series.back()));

  const WeakClassReport ok = weak_class_check(series, p, std::numeric_limits<double>::infinity());
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.sup_em, std::max(series[0].e_m, series[1].e_m));
  EXPECT_EQ(ok.d_integral, series[1].d_accum);

  const WeakClassReport low = weak_class_check(series, p, series[0].e_m);
  EXPECT_FALSE(low.passed());
  ASSERT_TRUE(low.ceiling_exceeded_time);
  EXPECT_EQ(*low.ceiling_exceeded_time, 1.0);

  series[1].e_m = std::nan("");
  const WeakClassReport bad = weak_class_check(series, p, std::numeric_limits<double>::infinity());
  EXPECT_FALSE(bad.finite);
  EXPECT_EQ(*bad.first_nonfinite_time, 1.0);
  EXPECT_THROW(weak_class_check({}, p, 1.0), InvalidArgument);
}

TEST(BoundedClass, MultipleOfInitialMaximum) {
  SimParams p = params_for(BoundaryMode::periodic, 2, 8, 1.0);
  p.tau = 0;
  std::vector<DiagnosticsRecord> series(3);
  series[0].max_n = 1.0;
  series[1].t = 0.5;
  series[1].max_n = 1.9;
  series[2].t = 1.0;
  series[2].max_n = 2.1;
  const BoundedClassReport r = bounded_class_check(series, p, 2.0);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(*r.exceeded_time, 1.0);
  EXPECT_EQ(r.sup_max_n, 2.1);
  EXPECT_FALSE(r.fluid_warning);
  EXPECT_TRUE(bounded_class_check(series, p, 3.0).passed);
  p.tau = 1;
  EXPECT_TRUE(bounded_class_check(series, p, 3.0).fluid_warning);
  EXPECT_THROW(bounded_class_check(series, p, 0.0), InvalidArgument);
}

TEST(Csv, HeaderAndRoundTrip) {
  const SimParams p = params_for(BoundaryMode::periodic, 2, 16, 2.0);
  const DiagnosticsRecord r = compute_record(random_state(p, 50), p);
  std::ostringstream os;
  write_csv(os, {r, r});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(std::count(line.begin(), line.end(), ',') + 1, static_cast<long>(csv_header().size()));
  EXPECT_EQ(line.substr(0, 7), "t,mass,");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    std::vector<double> values;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) values.push_back(std::stod(cell));
    ASSERT_EQ(values.size(), csv_header().size());
    EXPECT_EQ(values[1], r.mass);
    EXPECT_EQ(values[12], r.e_m);
  }
  EXPECT_EQ(rows, 2);
}
