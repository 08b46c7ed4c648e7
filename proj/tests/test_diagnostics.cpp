#include "ldrlle/diagnostics.hpp"
#include "ldrlle/errors.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <Eigen/QR>

using namespace ldrlle;

TEST_CASE("reconstruction error")
{
  const NeighborhoodMatrix cross = gridCross();
  CHECK(reconstructionError(cross, Vector::Constant(4, 0.25)) == doctest::Approx(0.0));

  Matrix rows(2, 2);
  rows << 1, 0, 0, 2;
  const auto xi = makeNeighborhood(rows);
  Vector w(2);
  w << 0.8, 0.2;
  CHECK(reconstructionError(xi, w) == doctest::Approx(0.8));
  // no feasible weight does better than the scalar minimizer
  for (double a = -2.0; a <= 3.0; a += 0.01) {
    Vector v(2);
    v << a, 1.0 - a;
    CHECK(reconstructionError(xi, v) >= 0.8 - 1e-12);
  }
  CHECK(reconstructionError(makeNeighborhood(3.0 * rows), w) == doctest::Approx(9.0 * 0.8));
  CHECK_THROWS_AS(reconstructionError(xi, Vector::Ones(3)), InvalidArgument);
}

TEST_CASE("perturbation bound formula")
{
  const auto b = perturbationBound(0.5, 0.5, 1e-4);
  REQUIRE(b.has_value());
  CHECK(*b == doctest::Approx(0.016));

  const double l = 0.5;
  CHECK_FALSE(perturbationBound(l, 0.0, std::pow(l, 4) / 72.0).has_value());
  CHECK(perturbationBound(l, 0.0, 0.999 * std::pow(l, 4) / 72.0).has_value());
  CHECK_FALSE(perturbationBound(0.5, 1.0 - 1e-12, 1e-8).has_value());
  CHECK_THROWS_AS(perturbationBound(0.5, 1.0, 1e-4), InvalidArgument);
  CHECK_THROWS_AS(perturbationBound(0.5, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(perturbationBound(0.5, -0.1, 1e-4), InvalidArgument);
}

TEST_CASE("perturbation experiment")
{
  PerturbationConfig config;
  config.trials = 200;
  const auto reports = perturbationExperiment(config);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    CHECK(r.distancesLdr.size() == 200);
    CHECK(r.bound == doctest::Approx(20.0 * r.epsilon / (0.99 * 0.99)));
    CHECK(r.violations() == 0);
    for (std::size_t t = 0; t < r.distancesLdr.size(); ++t) {
      CHECK(r.preconditionsMet[t]);
      CHECK(r.distancesLdr[t] >= 0.0);
      CHECK(r.distancesLdr[t] < r.bound);
    }
  }
  // classical weights stay O(1) away from uniform however small the noise
  const auto& smallest = reports.back();
  std::vector<double> c = smallest.distancesClassical;
  std::sort(c.begin(), c.end());
  CHECK(c[c.size() / 2] > 0.1);

  // deterministic: identical reports from identical configs
  const auto again = perturbationExperiment(config);
  CHECK(again[1].distancesLdr == reports[1].distancesLdr);
  CHECK(perturbationJson(config, again).dump() == perturbationJson(config, reports).dump());

  config.epsilons = {0.0};
  CHECK_THROWS_AS(perturbationExperiment(config), InvalidArgument);
}

TEST_CASE("perturbation bound holds on random neighborhoods with a spectral gap")
{
  Rng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    // a nearly 2-dimensional neighborhood of 6 points in R^5, lambda_1 < 1
    Matrix x = Matrix::Zero(6, 5);
    x.leftCols(2) = oracle::randomMatrix(6, 2, rng);
    x.col(2) = 1e-4 * oracle::randomMatrix(6, 1, rng);
    x = x * oracle::randomOrthogonal(5, rng);
    const double top = Eigen::JacobiSVD<Matrix>(x).singularValues()(0);
    x *= 0.9 / top;
    const auto base = makeNeighborhood(x);
    const auto s = neighborhoodSpectrum(base, 2);
    if (!spectralGapHolds(s)) continue;
    const double eps = 1e-7;
    const auto bound = perturbationBound(s.singularValues(1), s.alpha, eps);
    if (!bound) continue;
    Matrix e = oracle::randomMatrix(6, 5, rng);
    e /= e.norm();
    const Vector w = ldrWeights(s);
    const Vector wt = ldrWeights(makeNeighborhood(x + eps * e), 2);
    CHECK((w - wt).norm() < *bound);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("preimage residual statistics")
{
  const auto ring = genOpenRing(64);
  const auto r = preimageResidualCheck(ring, 4, 1);
  CHECK(r.n == 64);
  CHECK(r.rMax > 0.0);
  CHECK(r.phiZOverN * 10.0 < r.nullPhiZOverN);

  // preimage Phi is unchanged by a rigid motion of Z for fixed W
  const auto roll = genSwissroll(500, 3);
  const auto a = assembleWeightMatrix(roll.points, knn(roll.points, 12), LdrMethod{2});
  Rng rng(6);
  Matrix moved = roll.preimage * oracle::randomOrthogonal(2, rng);
  moved.rowwise() += Eigen::RowVector2d(4.0, -7.0);
  CHECK(std::abs(phiOverN(moved, a.w) - phiOverN(roll.preimage, a.w)) < 1e-10);

  // planar data: the preimage is the data itself up to a rigid motion
  Matrix plane(200, 3);
  Matrix params(200, 2);
  for (Index i = 0; i < 200; ++i) {
    params(i, 0) = rng.uniform();
    params(i, 1) = rng.uniform();
  }
  const Matrix embedPlane = oracle::randomOrthogonal(3, rng).leftCols(2).transpose();
  plane = params * embedPlane;
  const auto p = preimageResidualCheck(PointCloud(plane), params, 8, 2);
  CHECK(p.phiZOverN < 1e-20);
  CHECK(p.maxLambdaDp1 < 1e-12);

  CHECK_THROWS_AS(preimageResidualCheck(ring.points, Matrix::Zero(10, 1), 4, 1), InvalidArgument);
}

TEST_CASE("linear fit statistic")
{
  Rng rng(1);
  const Matrix x = oracle::randomMatrix(300, 4, rng);
  const Matrix proj = oracle::randomMatrix(4, 2, rng);
  CHECK(linearR2(x, x * proj) == doctest::Approx(1.0));
  Matrix shifted = x * proj;
  shifted.rowwise() += Eigen::RowVector2d(3, 4);
  CHECK(linearR2(x, shifted) == doctest::Approx(1.0));

  // random orthonormal outputs: R^2 ~ D / N
  double total = 0.0;
  const Matrix big = oracle::randomMatrix(1000, 3, rng);
  for (int t = 0; t < 100; ++t) {
    Matrix r = oracle::randomMatrix(1000, 2, rng);
    r.rowwise() -= r.colwise().mean();
    const Matrix q = Eigen::HouseholderQR<Matrix>(r).householderQ() * Matrix::Identity(1000, 2);
    const double r2 = linearR2(big, q);
    CHECK(r2 >= 0.0);
    CHECK(r2 <= 1.0);
    total += r2;
  }
  CHECK(total / 100.0 < 0.02);

  // a curved output is not an affine image of its input
  Matrix t(200, 1), y(200, 1);
  for (Index i = 0; i < 200; ++i) {
    t(i, 0) = -1.0 + 2.0 * static_cast<double>(i) / 199.0;
    y(i, 0) = t(i, 0) * t(i, 0);
  }
  CHECK(linearR2(t, y) < 0.1);
  CHECK_THROWS_AS(linearR2(t, Matrix::Zero(3, 1)), InvalidArgument);
}

TEST_CASE("procrustes residual")
{
  Rng rng(2);
  const Matrix a = oracle::randomMatrix(50, 2, rng);
  Matrix b = 3.0 * a * oracle::randomOrthogonal(2, rng);
  b.rowwise() += Eigen::RowVector2d(1, 1);
  CHECK(procrustesResidual(a, b) < 1e-12);
  const double unrelated = procrustesResidual(a, oracle::randomMatrix(50, 2, rng));
  CHECK(unrelated > 0.5);
  CHECK(unrelated <= 1.0);
  CHECK_THROWS_AS(procrustesResidual(a, Matrix::Zero(50, 2)), InvalidArgument);
}

TEST_CASE("spearman monotonicity")
{
  Vector z(16);
  for (Index i = 0; i < 16; ++i) z(i) = 0.1 * static_cast<double>(i * i);
  CHECK(monotonicity1d(z, z) == doctest::Approx(1.0));
  CHECK(monotonicity1d(-z, z) == doctest::Approx(-1.0));
  CHECK(monotonicity1d(z.array().exp().matrix(), z) == doctest::Approx(1.0));
  CHECK_THROWS_AS(monotonicity1d(Vector::Ones(16), z), InvalidArgument);

  // ties take the average rank
  Vector a(4), b(4);
  a << 1, 2, 2, 3;
  b << 1, 2, 3, 4;
  CHECK(monotonicity1d(a, b) == doctest::Approx(0.9486832980505138));

  Rng rng(9);
  double total = 0.0;
  for (int t = 0; t < 100; ++t) {
    Vector s = z;
    for (Index i = 15; i > 0; --i) std::swap(s(i), s(static_cast<Index>(rng.next() % static_cast<std::uint64_t>(i + 1))));
    total += std::abs(monotonicity1d(s, z));
  }
  CHECK(total / 100.0 < 0.35);
}

TEST_CASE("embedding diagnostics bundle")
{
  const auto ring = genOpenRing(16);
  const auto a = assembleWeightMatrix(ring.points, knn(ring.points, 4), LdrMethod{1});
  const Embedding e = embed(a.w, 1);
  const auto diag = linearProjectionDiagnostic(ring.points, e, a.w, &ring.preimage);
  CHECK(diag.phiValue == doctest::Approx(e.eigenvalues.sum()));
  REQUIRE(diag.rankCorrelation.has_value());
  CHECK(std::abs(*diag.rankCorrelation) > 0.95);
  REQUIRE(diag.procrustesResidual.has_value());
  CHECK(diag.linearR2 >= 0.0);
  CHECK(diag.linearR2 <= 1.0);
  CHECK_FALSE(linearProjectionDiagnostic(ring.points, e, a.w).rankCorrelation.has_value());
}
