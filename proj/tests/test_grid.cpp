#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "chemoflux/grid.hpp"
#include "chemoflux/snapshot.hpp"

using namespace chemoflux;

namespace {

constexpr double kPi = std::numbers::pi;

DomainSpec periodic(int dim, int n, double length = 2.0 * kPi) {
  DomainSpec d;
  d.dim = dim;
  d.mode = BoundaryMode::periodic;
  d.lengths = {length, length, length};
  d.resolution = {n, n, n};
  return d;
}

DomainSpec walled(int dim, int n, double length = 1.0) {
  DomainSpec d = periodic(dim, n, length);
  d.mode = BoundaryMode::neumann;
  return d;
}

ScalarField random_field(const DomainSpec& spec, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(spec);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = u(gen);
  return f;
}

double max_abs(const ScalarField& f) { return f.values().abs().maxCoeff(); }

// Max error of the x-derivative of sin(x) on a periodic grid of n cells.
double sin_gradient_error(int n) {
  const DomainSpec spec = periodic(2, n);
  const ScalarField f = sample(spec, [](const auto& x) { return std::sin(x[0]); });
  const ScalarField exact = sample(spec, [](const auto& x) { return std::cos(x[0]); });
  const VecField g = gradient(f);
  return (g[0].values() - exact.values()).abs().maxCoeff();
}

double cos_laplacian_error(int n) {
  const DomainSpec spec = periodic(3, n);
  const ScalarField f = sample(spec, [](const auto& x) { return std::cos(x[0]) * std::cos(2.0 * x[1]); });
  const ScalarField lap = laplacian(f);
  const ScalarField exact = sample(spec, [](const auto& x) { return -5.0 * std::cos(x[0]) * std::cos(2.0 * x[1]); });
  return (lap.values() - exact.values()).abs().maxCoeff();
}

}  // namespace

TEST(Gradient, ConstantFieldHasZeroGradient) {
  for (const DomainSpec& spec : {periodic(3, 8), walled(2, 12)}) {
    const VecField g = gradient(ScalarField(spec, 3.25));
    for (int a = 0; a < spec.dim; ++a) EXPECT_EQ(max_abs(g[a]), 0.0);
  }
}

TEST(Gradient, SecondOrderOnSine) {
  const double e1 = sin_gradient_error(32);
  const double e2 = sin_gradient_error(64);
  EXPECT_LT(e2, 1e-2);
  EXPECT_GT(std::log2(e1 / e2), 1.9);
}

TEST(Gradient, MirrorGhostCopiesTheWallCell) {
  // g = k^2 with k the distance (in cells) to the nearest x-wall. The ghost
  // beyond the wall equals g at the wall cell, so the central stencil there
  // sees (g[1] - g[0]) / 2h.
  const DomainSpec spec = walled(2, 16);
  ScalarField g(spec);
  const Layout lay(spec);
  lay.for_each([&](Eigen::Index idx, const auto& c) {
    const Eigen::Index k = std::min(c[0], lay.extent[0] - 1 - c[0]);
    g[idx] = static_cast<double>(k * k);
  });
  const VecField grad = gradient(g);
  const double h = spec.cell_size(0);
  for (Eigen::Index j = 0; j < lay.extent[1]; ++j) {
    EXPECT_DOUBLE_EQ(grad[0][lay.index(0, j)], 0.5 / h);
    EXPECT_DOUBLE_EQ(grad[0][lay.index(lay.extent[0] - 1, j)], -0.5 / h);
    EXPECT_EQ(grad[1][lay.index(0, j)], 0.0);
  }
}

TEST(Gradient, OddProfileAboutTheMidlineHasAnEvenGradient) {
  const DomainSpec spec = walled(2, 16);
  const ScalarField f = sample(spec, [](const auto& x) { return std::cos(kPi * x[0]); });
  const VecField g = gradient(f);
  const Layout lay(spec);
  for (Eigen::Index i = 0; i < 16; ++i)
    EXPECT_NEAR(g[0][lay.index(i, 3)], g[0][lay.index(15 - i, 3)], 1e-12);
}

TEST(Divergence, ConstantVectorFieldIsDivergenceFree) {
  const DomainSpec spec = periodic(3, 8);
  EXPECT_EQ(max_abs(divergence(VecField(spec, 2.0))), 0.0);
}

TEST(Divergence, IntegratesToZero) {
  for (const DomainSpec& spec : {periodic(3, 10), walled(2, 16), walled(3, 8)}) {
    VecField v(spec);
    for (int a = 0; a < spec.dim; ++a) v[a] = random_field(spec, 11 + a);
    EXPECT_NEAR(integrate(divergence(v)), 0.0, 1e-12);
  }
}

TEST(Divergence, NegativeAdjointOfGradientInPeriodicMode) {
  const DomainSpec spec = periodic(3, 8, 3.0);
  const ScalarField f = random_field(spec, 3);
  VecField v(spec);
  for (int a = 0; a < 3; ++a) v[a] = random_field(spec, 4 + a);
  const VecField gf = gradient(f);
  double lhs = 0.0;
  for (int a = 0; a < 3; ++a) lhs += integrate(ScalarField(spec, gf[a].values() * v[a].values()));
  const double rhs = -integrate(ScalarField(spec, f.values() * divergence(v).values()));
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST(Laplacian, SecondOrderOnCosine) {
  const double e1 = cos_laplacian_error(32);
  const double e2 = cos_laplacian_error(64);
  EXPECT_GT(std::log2(e1 / e2), 1.9);
}

TEST(Laplacian, EqualsFaceDivergenceOfFaceGradient) {
  for (const DomainSpec& spec : {periodic(3, 8), walled(2, 12), walled(3, 8)}) {
    const ScalarField f = random_field(spec, 21);
    const ScalarField a = laplacian(f);
    const ScalarField b = face_divergence(face_gradient(f));
    EXPECT_LT((a.values() - b.values()).abs().maxCoeff(), 1e-9 * max_abs(a));
  }
}

TEST(Laplacian, IntegrationByParts) {
  // sum f lap f = -sum |face grad f|^2 with zero wall flux in neumann mode.
  for (const DomainSpec& spec : {periodic(2, 16), walled(2, 16)}) {
    const ScalarField f = random_field(spec, 5);
    const double lhs = integrate(ScalarField(spec, f.values() * laplacian(f).values()));
    const double rhs = -l2_norm_squared(face_gradient(f));
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(rhs));
  }
}

TEST(Quadrature, ConstantIntegralAndNorms) {
  const DomainSpec spec = periodic(3, 8, 2.0);
  const ScalarField f(spec, 3.0);
  EXPECT_NEAR(integrate(f), 24.0, 1e-12);
  EXPECT_NEAR(lp_norm(f, 1.0), 24.0, 1e-12);
  EXPECT_NEAR(lp_norm(f, 2.0), 3.0 * std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(lp_norm(f, 1.5), 3.0 * std::pow(8.0, 1.0 / 1.5), 1e-12);
  EXPECT_EQ(lp_norm(f, std::numeric_limits<double>::infinity()), 3.0);
}

TEST(Quadrature, RejectsExponentBelowOne) {
  const ScalarField f(periodic(2, 8), 1.0);
  EXPECT_THROW(lp_norm(f, 0.5), InvalidArgument);
  EXPECT_THROW(lp_norm(f, std::nan("")), InvalidArgument);
}

TEST(Quadrature, CompensatedSumKeepsSmallTerms) {
  DomainSpec spec = periodic(1, 8, 8.0);
  ScalarField f(spec, 1e-16);
  f[0] = 1.0;
  EXPECT_EQ(integrate(f), 1.0 + 7e-16);
}

TEST(Layout, CellCentersAreSymmetricInPeriodicMode) {
  const DomainSpec spec = periodic(2, 8, 4.0);
  EXPECT_DOUBLE_EQ(cell_center(spec, 0, 0), -1.75);
  EXPECT_DOUBLE_EQ(cell_center(spec, 0, 7), 1.75);
  const DomainSpec w = walled(2, 8, 4.0);
  EXPECT_DOUBLE_EQ(cell_center(w, 1, 0), 0.25);
}

TEST(Field, RejectsMismatchedValueCount) {
  EXPECT_THROW(ScalarField(periodic(2, 8), ScalarField::Array::Zero(10)), InvalidArgument);
}

TEST(Snapshot, RoundTripIsBitExact) {
  const DomainSpec spec = walled(2, 12, 3.0);
  const ScalarField f = random_field(spec, 99);
  const auto dir = std::filesystem::temp_directory_path() / "chemoflux_snapshot_test";
  std::filesystem::create_directories(dir);
  write_snapshot(dir / "n_0001", f, "n", 0.125);
  SnapshotMeta meta;
  const ScalarField g = read_snapshot(dir / "n_0001.json", &meta);
  EXPECT_EQ(meta.field, "n");
  EXPECT_EQ(meta.time, 0.125);
  EXPECT_EQ(meta.spec, spec);
  EXPECT_TRUE((g.values() == f.values()).all());
  EXPECT_TRUE((read_snapshot(dir / "n_0001").values() == f.values()).all());
  std::filesystem::remove_all(dir);
}
