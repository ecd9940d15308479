#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "chemoflux/oracle.hpp"
#include "chemoflux/solver.hpp"

using namespace chemoflux;
using namespace chemoflux::oracle;

namespace {

constexpr double kPi = std::numbers::pi;

// Classical RK4 on dc/dt = -kappa(c) n, used as an independent reference.
double rk4_uniform(double n, double c, const ChiKappaModel& m, double t, int steps) {
  const double h = t / steps;
  auto f = [&](double y) { return -m.kappa(std::max(y, 0.0)) * n; };
  for (int k = 0; k < steps; ++k) {
    const double k1 = f(c), k2 = f(c + 0.5 * h * k1), k3 = f(c + 0.5 * h * k2), k4 = f(c + h * k3);
    c += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return c;
}

DomainSpec manufactured_domain(int n) {
  DomainSpec d;
  d.dim = 2;
  d.mode = BoundaryMode::periodic;
  d.lengths = {2.0 * kPi, 2.0 * kPi, 1.0};
  d.resolution = {n, n, 8};
  return d;
}

struct Residuals {
  double n;
  double c;
  double u;
};

// Max difference between the analytic forcing and a residual built from
// central differences of the exact solution (time step eps, grid spacing h).
Residuals forcing_mismatch(const ManufacturedProblem& mp, int n, double t) {
  const DomainSpec spec = manufactured_domain(n);
  const double eps = 1e-5;
  const FieldState s = mp.exact(spec, t);
  const FieldState sp = mp.exact(spec, t + eps);
  const FieldState sm = mp.exact(spec, t - eps);
  const Sources f = mp.forcing(spec, t);
  const double a = mp.params.alpha, rho = mp.params.rho;

  const ScalarField F(spec, (s.n.values() + rho).pow(1.0 + a));
  const VecField gc = gradient(s.c);
  VecField flux(spec);
  for (int i = 0; i < 2; ++i) {
    ScalarField::Array chi = s.c.values().unaryExpr([&](double c) { return mp.model.chi(c); });
    flux[i].values() = s.n.values() * (chi * gc[i].values() + s.u[i].values());
  }
  const ScalarField n_t(spec, (sp.n.values() - sm.n.values()) / (2 * eps));
  const ScalarField rn(spec, n_t.values() - laplacian(F).values() + divergence(flux).values());

  ScalarField::Array u_grad_c = s.u[0].values() * gc[0].values() + s.u[1].values() * gc[1].values();
  ScalarField::Array kappa_n = s.c.values().unaryExpr([&](double c) { return mp.model.kappa(c); }) * s.n.values();
  const ScalarField c_t(spec, (sp.c.values() - sm.c.values()) / (2 * eps));
  const ScalarField rc(spec, c_t.values() + u_grad_c - laplacian(s.c).values() + kappa_n);

  VecField ru(spec);
  for (int i = 0; i < 2; ++i) {
    const VecField gu = gradient(s.u[i]);
    ScalarField::Array conv = s.u[0].values() * gu[0].values() + s.u[1].values() * gu[1].values();
    ru[i].values() = (sp.u[i].values() - sm.u[i].values()) / (2 * eps) + mp.params.tau * conv -
                     laplacian(s.u[i]).values() + mp.params.phi_gradient[i] * (s.n.values() - 1.0) - f.u[i].values();
  }
  // Only the solenoidal part of the momentum residual matters.
  const VecField ru_sol = project(ru).first;

  return {(rn.values() - f.n.values()).abs().maxCoeff(), (rc.values() - f.c.values()).abs().maxCoeff(),
          std::max(ru_sol[0].values().abs().maxCoeff(), ru_sol[1].values().abs().maxCoeff())};
}

}  // namespace

TEST(UniformOde, ClosedForms) {
  EXPECT_NEAR(uniform_state_ode(2.0, 1.5, ChiKappaModel{1.0, 0.0, 0.3, 1.0}, 0.7), 1.5 * std::exp(-0.3 * 2.0 * 0.7),
              1e-15);
  EXPECT_NEAR(uniform_state_ode(2.0, 1.5, ChiKappaModel{1.0, 0.0, 0.3, 2.0}, 0.7),
              1.5 / (1.0 + 0.3 * 2.0 * 1.5 * 0.7), 1e-15);
  EXPECT_EQ(uniform_state_ode(2.0, 1.5, ChiKappaModel{1.0, 0.0, 0.0, 3.0}, 5.0), 1.5);
  EXPECT_EQ(uniform_state_ode(0.0, 0.9, ChiKappaModel{}, 5.0), 0.9);
}

TEST(UniformOde, FractionalPowerMatchesRungeKutta) {
  for (double m : {1.5, 2.5, 3.0}) {
    const ChiKappaModel model{1.0, 0.0, 0.8, m};
    EXPECT_NEAR(uniform_state_ode(1.2, 1.1, model, 2.0), rk4_uniform(1.2, 1.1, model, 2.0, 20000), 1e-11) << m;
  }
}

TEST(UniformOde, RejectsBadInput) {
  EXPECT_THROW(uniform_state_ode(-1.0, 1.0, ChiKappaModel{}, 1.0), InvalidArgument);
  EXPECT_THROW(uniform_state_ode(1.0, -1.0, ChiKappaModel{}, 1.0), InvalidArgument);
  EXPECT_THROW(uniform_state_ode(1.0, 1.0, ChiKappaModel{}, std::nan("")), InvalidArgument);
}

TEST(Barenblatt, ExponentsFollowFromAlphaAndDimension) {
  const Barenblatt b(0.5, 1.0, 3);
  EXPECT_DOUBLE_EQ(b.k(), 3.0 / (3.0 * 0.5 + 2.0));
  EXPECT_DOUBLE_EQ(b.K(), b.k() * 0.5 / (2.0 * 1.5 * 3.0));
}

TEST(Barenblatt, CarriesItsMass) {
  for (int dim : {1, 2, 3}) {
    const double mass = 1.7;
    const Barenblatt b(0.5, mass, dim);
    const double t = 0.3;
    const double R = b.support_radius(t);
    const int n = dim == 1 ? 4000 : dim == 2 ? 600 : 120;
    const double h = 2.0 * R / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < (dim > 1 ? n : 1); ++j)
        for (int k = 0; k < (dim > 2 ? n : 1); ++k) {
          std::array<double, 3> x{-R + (i + 0.5) * h, 0.0, 0.0};
          if (dim > 1) x[1] = -R + (j + 0.5) * h;
          if (dim > 2) x[2] = -R + (k + 0.5) * h;
          total += b(x, t);
        }
    total *= std::pow(h, dim);
    EXPECT_NEAR(total, mass, 2e-3 * mass) << dim;
  }
}

TEST(Barenblatt, CompactSupport) {
  const Barenblatt b(0.5, 1.0, 2);
  const double t = 0.05;
  const double R = b.support_radius(t);
  EXPECT_GT(b({0.999 * R, 0.0, 0.0}, t), 0.0);
  EXPECT_EQ(b({1.001 * R, 0.0, 0.0}, t), 0.0);
  EXPECT_EQ(b({0.0, 1.001 * R, 0.0}, t), 0.0);
  EXPECT_NEAR(R, std::sqrt(b.C() / b.K()) * std::pow(t, b.k() / 2.0), 1e-14);
}

TEST(Barenblatt, SelfSimilarity) {
  const double alpha = 0.8;
  for (int dim : {1, 2, 3}) {
    const Barenblatt b(alpha, 2.0, dim);
    const double k = b.k();
    for (double t : {0.1, 0.5, 2.0})
      for (double r : {0.0, 0.2, 0.6}) {
        const std::array<double, 3> x{r, 0.0, 0.0};
        const std::array<double, 3> y{r * std::pow(t, -k / dim), 0.0, 0.0};
        EXPECT_NEAR(b(x, t), std::pow(t, -k) * b(y, 1.0), 1e-12);
      }
    EXPECT_EQ(barenblatt(alpha, 2.0, dim, 0.5, {0.1, 0.0, 0.0}), b({0.1, 0.0, 0.0}, 0.5));
  }
}

TEST(Barenblatt, SolvesThePorousMediumEquationAwayFromTheFront) {
  // 1D: n_t = (n^m)_xx checked by central differences inside the support.
  const double alpha = 0.5, m = 1.5;
  const Barenblatt b(alpha, 1.0, 1);
  const double t = 0.2, eps = 1e-6, h = 1e-3;
  for (double x : {0.0, 0.1, 0.25}) {
    ASSERT_LT(x + 2 * h, 0.8 * b.support_radius(t));
    const double nt = (b({x, 0, 0}, t + eps) - b({x, 0, 0}, t - eps)) / (2 * eps);
    auto pm = [&](double y) { return std::pow(b({y, 0, 0}, t), m); };
    const double lap = (pm(x + h) - 2 * pm(x) + pm(x - h)) / (h * h);
    EXPECT_NEAR(nt, lap, 1e-4 * std::max(1.0, std::abs(nt)));
  }
}

TEST(Manufactured, VelocityIsDiscretelyDivergenceFree) {
  const ManufacturedStudySettings s = default_manufactured_settings();
  const FieldState e = s.problem.exact(manufactured_domain(32), 0.1);
  EXPECT_LT(lp_norm(divergence(e.u), std::numeric_limits<double>::infinity()), 1e-14);
}

TEST(Manufactured, ForcingMatchesFiniteDifferenceResidual) {
  const ManufacturedProblem mp = default_manufactured_settings().problem;
  const Residuals coarse = forcing_mismatch(mp, 32, 0.1);
  const Residuals fine = forcing_mismatch(mp, 64, 0.1);
  EXPECT_GT(std::log2(coarse.n / fine.n), 1.8);
  EXPECT_GT(std::log2(coarse.c / fine.c), 1.8);
  EXPECT_LT(fine.n, 1e-2);
  EXPECT_LT(fine.c, 1e-2);
  EXPECT_LT(fine.u, 1e-3);
}

TEST(Manufactured, RejectsUnsuitableDomains) {
  const ManufacturedProblem mp = default_manufactured_settings().problem;
  DomainSpec d = manufactured_domain(16);
  d.lengths[0] = 1.0;
  EXPECT_THROW(mp.validate(d), InvalidArgument);
  d = manufactured_domain(16);
  d.mode = BoundaryMode::neumann;
  EXPECT_THROW(mp.validate(d), InvalidArgument);
}

TEST(Orders, ObservedOrdersOfAKnownSequence) {
  const auto o = observed_orders({0.4, 0.2, 0.1}, {16.0, 4.0, 1.0});
  ASSERT_EQ(o.size(), 2u);
  EXPECT_NEAR(o[0], 2.0, 1e-14);
  EXPECT_NEAR(o[1], 2.0, 1e-14);
  EXPECT_THROW(observed_orders({1.0}, {1.0, 2.0}), InvalidArgument);
}

TEST(Studies, UniformStatePasses) {
  const StudyResult r = run_uniform_study(UniformStudySettings{});
  EXPECT_TRUE(r.passed) << format_study(r);
}

TEST(Studies, BarenblattPasses) {
  const StudyResult r = run_barenblatt_study(BarenblattStudySettings{});
  EXPECT_TRUE(r.passed) << format_study(r);
  ASSERT_FALSE(r.series.empty());
  const auto& errors = r.series.front().errors;
  EXPECT_TRUE(std::is_sorted(errors.rbegin(), errors.rend()));
}

TEST(Studies, ManufacturedSolutionConvergesAtSecondOrder) {
  const StudyResult r = run_manufactured_study(default_manufactured_settings());
  EXPECT_TRUE(r.passed) << format_study(r);
  EXPECT_EQ(r.series.size(), 3u);
}
