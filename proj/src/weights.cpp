#include "ldrlle/weights.hpp"
#include "ldrlle/errors.hpp"
#include "linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <charconv>
#include <cmath>
#include <limits>

namespace ldrlle {

namespace {

std::string fmt(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

NeighborhoodSpectrum computeSpectrum(const NeighborhoodMatrix& xi, Index d)
{
  const Matrix& x = xi.rows;
  const Index k = x.rows();

  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU);
  Matrix u = svd.matrixU();
  detail::canonicalizeSigns(u);

  NeighborhoodSpectrum s;
  s.d = d;
  s.radius = xi.radius;
  s.singularValues = Vector::Zero(k);
  s.singularValues.head(svd.singularValues().size()) = svd.singularValues();
  s.u1 = u.leftCols(d);
  s.u2 = u.rightCols(k - d);

  const Vector ones = Vector::Ones(k);
  s.alpha = d > 0 ? (s.u1.transpose() * ones).squaredNorm() / static_cast<double>(k) : 0.0;

  if (d > 0) {
    const double top = s.singularValues(0);
    const double gap = s.singularValues(d - 1) - s.singularValues(d);
    s.gapWarning = !(top > 0.0) || gap / top < kGapWarningThreshold;
  }
  return s;
}

Vector normalized(const Vector& w)
{
  const double sum = w.sum();
  if (!std::isfinite(sum) || std::abs(sum) <= 64 * std::numeric_limits<double>::epsilon() * w.lpNorm<1>())
    throw DegenerateWeights("reconstruction weights sum to zero; normalization is undefined");
  Vector out = w / sum;
  if (!out.allFinite()) throw DegenerateWeights("reconstruction weights are not finite");
  return out;
}

} // namespace

double NeighborhoodSpectrum::complementMass() const
{
  return (u2.transpose() * Vector::Ones(k())).squaredNorm();
}

double generalPositionTolerance(Index k) { return 1e-12 * static_cast<double>(k); }

NeighborhoodSpectrum neighborhoodSpectrum(const NeighborhoodMatrix& xi, Index d)
{
  const Index k = xi.rows.rows();
  if (d < 1 || d >= k)
    throw InvalidArgument("target dimension d = " + std::to_string(d) + " must satisfy 1 <= d < K = " +
                          std::to_string(k));
  return computeSpectrum(xi, d);
}

Vector lleWeights(const NeighborhoodMatrix& xi, double delta)
{
  if (!(delta >= 0.0)) throw InvalidArgument("regularization constant Delta must be non-negative");
  const Index k = xi.rows.rows();
  if (k < 1) throw InvalidArgument("empty neighborhood");

  Matrix g = xi.rows * xi.rows.transpose();
  if (g.trace() == 0.0)
    throw SingularNeighborhood("all neighbors coincide with the center; regularization cannot help");
  if (delta == 0.0) {
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(g, Eigen::EigenvaluesOnly).eigenvalues();
    const double hi = ev.cwiseAbs().maxCoeff();
    const double rcond = hi > 0.0 ? ev.minCoeff() / hi : 0.0;
    if (!(rcond >= kSingularRcond))
      throw SingularNeighborhood("Gram matrix of the neighborhood is singular (rcond " + fmt(rcond) +
                                 "); use Delta > 0 or the low-dimensional representation weights");
  } else {
    g.diagonal().array() += delta / static_cast<double>(k) * g.trace();
  }

  Eigen::LDLT<Matrix> ldlt(g);
  if (ldlt.info() != Eigen::Success) throw NumericalError("Gram matrix factorization failed");
  const Vector w = ldlt.solve(Vector::Ones(k));
  if (!w.allFinite()) throw NumericalError("regularized Gram solve produced non-finite weights");
  return normalized(w);
}

Vector lleWeightsPinv(const NeighborhoodMatrix& xi)
{
  const Index k = xi.rows.rows();
  const Matrix g = xi.rows * xi.rows.transpose();
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(static_cast<double>(k) * std::numeric_limits<double>::epsilon());
  return normalized(svd.solve(Vector::Ones(k)));
}

Vector ldrWeights(const NeighborhoodSpectrum& spectrum)
{
  const Index k = spectrum.k();
  const Vector projected = spectrum.u2 * (spectrum.u2.transpose() * Vector::Ones(k));
  const double mass = projected.sum();
  if (!(mass > generalPositionTolerance(k)))
    throw GeneralPositionViolation("projected neighborhood is not in general position (alpha = " +
                                       fmt(spectrum.alpha) + ")",
                                   spectrum.alpha);
  return projected / mass;
}

Vector ldrWeights(const NeighborhoodMatrix& xi, Index d) { return ldrWeights(neighborhoodSpectrum(xi, d)); }

WeightAssembly assembleWeightMatrix(const PointCloud& cloud, const NeighborGraph& graph,
                                    const WeightMethod& method, Index reportDim)
{
  const Index n = cloud.size();
  if (graph.size() != n) throw InvalidArgument("neighbor graph does not match the point cloud");
  const Index k = graph.k;

  WeightAssembly out;
  out.spectra.reserve(static_cast<std::size_t>(n));
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n * k));

  for (Index i = 0; i < n; ++i) {
    try {
      const NeighborhoodMatrix xi = neighborhoodMatrix(cloud, graph, i);
      Vector w;
      if (const auto* ldr = std::get_if<LdrMethod>(&method)) {
        out.spectra.push_back(neighborhoodSpectrum(xi, ldr->d));
        w = ldrWeights(out.spectra.back());
      } else {
        const auto& classical = std::get<ClassicalMethod>(method);
        const Index d = reportDim >= 1 && reportDim < k ? reportDim : 0;
        out.spectra.push_back(computeSpectrum(xi, d));
        w = lleWeights(xi, classical.delta);
      }
      for (Index j = 0; j < k; ++j) triplets.emplace_back(i, graph.indices(i, j), w(j));
    } catch (Error& e) {
      e.annotatePoint(static_cast<std::size_t>(i));
      throw;
    }
  }

  out.w.resize(n, n);
  out.w.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

std::string formatSparseTriplets(const SparseMatrix& w)
{
  std::string out;
  for (Index i = 0; i < w.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(w, i); it; ++it)
      out += std::to_string(it.row()) + ' ' + std::to_string(it.col()) + ' ' + fmt(it.value()) + '\n';
  return out;
}

std::string formatSpectraCsv(const std::vector<NeighborhoodSpectrum>& spectra)
{
  std::string out;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto& s = spectra[i];
    out += std::to_string(i);
    for (Index j = 0; j < s.singularValues.size(); ++j) out += ',' + fmt(s.singularValues(j));
    out += ',' + fmt(s.alpha) + ',' + fmt(s.radius) + '\n';
  }
  return out;
}

} // namespace ldrlle
