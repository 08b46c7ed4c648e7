#pragma once

#include "ldrlle/datasets.hpp"
#include "ldrlle/embedding.hpp"
#include "ldrlle/neighbors.hpp"
#include "ldrlle/types.hpp"
#include "ldrlle/weights.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ldrlle {

/// w' X_i X_i' w = |sum_j w_j (eta_j - x_i)|^2
double reconstructionError(const NeighborhoodMatrix& xi, const Vector& w);

/// Perturbation bound 20 eps / (lambda_d^2 (1 - alpha)).
///
/// Returns nullopt when eps < min(lambda_d^4 / 72, lambda_d^2 (1 - alpha) / 72)
/// does not hold strictly. Throws InvalidArgument for alpha outside [0, 1),
/// non-positive eps or non-positive lambda_d.
std::optional<double> perturbationBound(double lambdaD, double alpha, double epsilon);

/// Spectral-gap assumption: lambda_{d+1} < min(lambda_d^2, lambda_d / 72).
bool spectralGapHolds(const NeighborhoodSpectrum& spectrum);

struct PerturbationConfig
{
  std::vector<double> epsilons{1e-2, 1e-4, 1e-6};
  Index trials = 1000;
  std::uint64_t seed = 1;
  /// Largest singular value the base neighborhood is scaled to before perturbing.
  double topSingularValue = 0.99;
};

struct PerturbationReport
{
  double epsilon = 0;
  Index trials = 0;
  std::vector<double> distancesClassical; // |w - u| with u uniform, pseudo-inverse weights
  std::vector<double> distancesLdr;
  double bound = 0;                     // 20 eps / (lambda_d^2 (1 - alpha)), also when not applicable
  std::vector<bool> preconditionsMet;

  /// LDR trials whose preconditions hold but whose distance is not below the bound.
  Index violations() const;
};

/// The grid cross: center plus its 4 nearest grid neighbors, zero padded to
/// four dimensions, scaled so that the spacing is `spacing`.
NeighborhoodMatrix gridCross(double spacing = 1.0);

/// For each epsilon, perturbs the scaled grid cross by eps E with |E|_F = 1
/// (i.i.d. normal entries, normalized) and records the distance of both
/// methods' weights (classical via pseudo-inverse, LDR with d = 2) to the
/// uniform vector. Trial t of epsilon e draws from Rng::derive(seed', t) with
/// seed' = Rng::derive(seed, e), so results do not depend on evaluation order.
std::vector<PerturbationReport> perturbationExperiment(const PerturbationConfig& config);

nlohmann::json perturbationJson(const PerturbationConfig& config, const std::vector<PerturbationReport>& reports);
/// CSV "epsilon,trial,classical,ldr,preconditions_met".
std::string perturbationCsv(const std::vector<PerturbationReport>& reports);

struct PreimageCheckOptions
{
  Index nullDraws = 20;
  std::uint64_t seed = 1;
};

struct PreimageCheckResult
{
  Index n = 0;
  double phiZOverN = 0;
  double maxLambdaDp1 = 0;
  double rMax = 0;
  double ratio = 0;         // phiZOverN / (maxLambdaDp1 * rMax^2)
  double nullPhiZOverN = 0; // mean Phi(Z)/N over random row permutations of Z
};

/// Builds LDR weights on the sample points and evaluates Phi on the preimages.
PreimageCheckResult preimageResidualCheck(const PointCloud& points, const Matrix& preimage, Index k, Index d,
                             const PreimageCheckOptions& options = {});
inline PreimageCheckResult preimageResidualCheck(const GeneratedSample& sample, Index k, Index d,
                                    const PreimageCheckOptions& options = {})
{
  return preimageResidualCheck(sample.points, sample.preimage, k, d, options);
}

/// Phi(Z)/N for a fixed W; used for rigid-motion and null comparisons.
double phiOverN(const Matrix& z, const SparseMatrix& w);

struct EmbeddingDiagnostics
{
  double phiValue = 0;
  double linearR2 = 0;
  std::optional<double> procrustesResidual;
  std::optional<double> rankCorrelation;
};

/// Coefficient of determination of the least-squares affine map X -> Y, clamped to [0, 1].
double linearR2(const Matrix& x, const Matrix& y);

/// Procrustes disparity after centering, unit Frobenius scaling and the best
/// orthogonal alignment of y onto reference: 1 - (sum of singular values of y'ref)^2.
double procrustesResidual(const Matrix& y, const Matrix& reference);

/// Spearman rank correlation with average ranks for ties.
/// Throws InvalidArgument when either input is constant.
double monotonicity1d(const Vector& y, const Vector& preimage);

/// Fills linear R^2 and Phi; Procrustes and rank correlation only when a
/// reference is given (rank correlation requires one column on both sides).
EmbeddingDiagnostics linearProjectionDiagnostic(const PointCloud& x, const Embedding& y, const SparseMatrix& w,
                                                const Matrix* reference = nullptr);

} // namespace ldrlle
