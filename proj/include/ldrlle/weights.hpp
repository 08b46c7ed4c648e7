#pragma once

#include "ldrlle/neighbors.hpp"
#include "ldrlle/types.hpp"

#include <Eigen/SparseCore>

#include <string>
#include <variant>
#include <vector>

namespace ldrlle {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Default regularization constant for classical weights.
inline constexpr double kDefaultDelta = 1e-9;
/// Relative gap (lambda_d - lambda_{d+1}) / lambda_1 below which the d / d+1 split is flagged.
inline constexpr double kGapWarningThreshold = 1e-6;
/// Reciprocal condition number of the Gram matrix below which an unregularized solve is refused.
inline constexpr double kSingularRcond = 1e-12;

/// SVD summary of one neighborhood matrix X_i = U L V'.
///
/// The left singular basis is split after column d into U1 (top d directions)
/// and U2 (the orthogonal complement in R^K). Every singular vector has its
/// largest-magnitude entry positive.
struct NeighborhoodSpectrum
{
  Index d = 0;
  Vector singularValues; // length K, non-increasing, zero padded when D < K
  Matrix u1;             // K x d
  Matrix u2;             // K x (K - d)
  double alpha = 0.0;    // (1/K) 1'U1U1'1
  double radius = 0.0;   // r(i)
  bool gapWarning = false;

  Index k() const { return singularValues.size(); }
  /// 1'U2U2'1 = K (1 - alpha)
  double complementMass() const;
};

/// Throws InvalidArgument unless 1 <= d < K.
NeighborhoodSpectrum neighborhoodSpectrum(const NeighborhoodMatrix& xi, Index d);

/// Regularized reconstruction weights: solve (G + delta I) w = 1 with
/// G = X_i X_i' and delta = (Delta / K) trace(G), then normalize to sum 1.
///
/// With Delta == 0 a Gram matrix whose reciprocal condition number is below
/// kSingularRcond raises SingularNeighborhood.
Vector lleWeights(const NeighborhoodMatrix& xi, double delta = kDefaultDelta);

/// Unregularized classical weights through the pseudo-inverse: the minimum
/// norm solution of G w = 1, normalized to sum 1. Used where G may be exactly
/// singular and regularization is not wanted.
Vector lleWeightsPinv(const NeighborhoodMatrix& xi);

/// Weights against the best rank-d representation of the neighborhood:
/// w = U2U2'1 / (1'U2U2'1), the minimum-norm vector in span(U2) summing to 1.
Vector ldrWeights(const NeighborhoodMatrix& xi, Index d);
Vector ldrWeights(const NeighborhoodSpectrum& spectrum);

/// Floor on 1'U2U2'1 below which general position is considered violated.
double generalPositionTolerance(Index k);

struct ClassicalMethod
{
  double delta = kDefaultDelta;
};

struct LdrMethod
{
  Index d = 2;
};

using WeightMethod = std::variant<ClassicalMethod, LdrMethod>;

struct WeightAssembly
{
  SparseMatrix w; // N x N, row i supported on the neighbors of i
  std::vector<NeighborhoodSpectrum> spectra;
};

/// Computes every point's weights and stores them in W.
///
/// Spectra are always returned. For LdrMethod they are taken at the method's
/// d; for ClassicalMethod at reportDim when 1 <= reportDim < K, otherwise
/// with an empty U1 (alpha = 0). Per-point errors are rethrown annotated with
/// the point index.
WeightAssembly assembleWeightMatrix(const PointCloud& cloud, const NeighborGraph& graph,
                                    const WeightMethod& method, Index reportDim = 0);

/// "i j value" lines, 0-based indices, row-major order.
std::string formatSparseTriplets(const SparseMatrix& w);

/// CSV rows "i, lambda_1 .. lambda_K, alpha, r(i)".
std::string formatSpectraCsv(const std::vector<NeighborhoodSpectrum>& spectra);

} // namespace ldrlle
