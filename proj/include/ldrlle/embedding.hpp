#pragma once

#include "ldrlle/types.hpp"
#include "ldrlle/weights.hpp"

namespace ldrlle {

/// Output coordinates Y with Y'1 = 0 and Y'Y = I.
struct Embedding
{
  Matrix y;                 // N x d, unit-norm columns
  Vector eigenvalues;       // ascending, one per column of y
  double droppedEigenvalue; // the discarded eigenvalue of the constant vector
};

enum class EigenSolverKind
{
  automatic, ///< dense up to kDenseEigenLimit points, iterative above
  dense,
  iterative,
};

inline constexpr Index kDenseEigenLimit = 2048;
/// The dense path always resolves at least this many of the lowest eigenpairs.
inline constexpr Index kMinDenseEigenpairs = 16;

struct EmbedOptions
{
  EigenSolverKind solver = EigenSolverKind::automatic;
  double tolerance = 1e-12; // iterative solver: relative residual target
  int maxIterations = 5000;
};

/// M = (I - W)'(I - W), exactly symmetric.
SparseMatrix buildM(const SparseMatrix& w);

/// Number of weakly connected components of the graph supporting W.
Index supportComponents(const SparseMatrix& w);

/// Bottom non-zero eigenvectors of M as the d output coordinates.
///
/// The constant vector is deflated: M is solved on the orthogonal complement
/// of 1, and 1 itself must be a null vector (Rayleigh quotient below
/// 1e-9 lambda_max). A support graph with several components raises
/// DisconnectedGraph. Column signs make the largest-magnitude entry positive.
Embedding embed(const SparseMatrix& w, Index d, const EmbedOptions& options = {});

/// Phi(Y) = sum_i |y_i - sum_j w_ij y_j|^2 for any column count.
double phi(const Matrix& y, const SparseMatrix& w);

struct Eigenpairs
{
  Vector values;
  Matrix vectors;
};

enum class Deflation
{
  none,
  constant, ///< restrict to vectors orthogonal to 1 (requires M1 = 0)
};

/// Smallest `count` eigenpairs of a sparse symmetric PSD matrix, ascending.
/// Exposed so that the two solver paths can be checked against each other.
Eigenpairs smallestEigenpairs(const SparseMatrix& m, Index count, Deflation deflation = Deflation::none,
                              const EmbedOptions& options = {});

} // namespace ldrlle
