#include "ldrlle/embedding.hpp"
#include "ldrlle/datasets.hpp"
#include "ldrlle/errors.hpp"
#include "linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ldrlle {

SparseMatrix buildM(const SparseMatrix& w)
{
  if (w.rows() != w.cols()) throw InvalidArgument("weight matrix must be square");
  SparseMatrix identity(w.rows(), w.cols());
  identity.setIdentity();
  const Eigen::SparseMatrix<double> a = identity - w;
  const Eigen::SparseMatrix<double> m = Eigen::SparseMatrix<double>(a.transpose()) * a;
  const Eigen::SparseMatrix<double> mt = m.transpose();
  SparseMatrix sym = 0.5 * (m + mt);
  sym.makeCompressed();
  return sym;
}

Index supportComponents(const SparseMatrix& w)
{
  const Index n = w.rows();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      auto& p = parent[static_cast<std::size_t>(v)];
      p = parent[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  };
  Index components = n;
  for (Index i = 0; i < w.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
      const Index a = find(it.row()), b = find(it.col());
      if (a != b) {
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        --components;
      }
    }
  return components;
}

namespace {

// Householder reflector H = I - beta v v' with H e_1 = -1/sqrt(N).
struct ConstantReflector
{
  Vector v;
  double beta;

  explicit ConstantReflector(Index n)
  {
    v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    v(0) += 1.0;
    beta = 2.0 / v.squaredNorm();
  }

  Matrix apply(const Matrix& x) const { return x - beta * v * (v.transpose() * x); }
};

// Lowest `count` eigenpairs of a dense symmetric matrix (LAPACK dsyevr, index range).
Eigenpairs lapackSmallest(Matrix a, Index count)
{
  const auto n = static_cast<lapack_int>(a.rows());
  Vector values(a.rows());
  Matrix vectors(a.rows(), count);
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1,
                                         static_cast<lapack_int>(count), 0.0, &found, values.data(),
                                         vectors.data(), n, support.data());
  if (info != 0 || found != count)
    throw NumericalError("dense eigensolver failed (LAPACK info " + std::to_string(info) + ")");
  return {values.head(count), std::move(vectors)};
}

Eigenpairs denseSmallest(const SparseMatrix& m, Index count, Deflation deflation)
{
  const Index n = m.rows();
  const Index space = deflation == Deflation::constant ? n - 1 : n;
  // A fixed leading block keeps results for different d consistent with each other.
  const Index requested = std::min(space, std::max(count, kMinDenseEigenpairs));

  if (deflation == Deflation::none) {
    Eigenpairs all = lapackSmallest(Matrix(m), requested);
    return {all.values.head(count), all.vectors.leftCols(count)};
  }

  // H M H has a zero first row and column; the trailing block is M on 1-perp.
  const ConstantReflector h(n);
  Matrix hm = Matrix(m);
  hm -= h.beta * h.v * (h.v.transpose() * hm);
  hm -= h.beta * (hm * h.v) * h.v.transpose();
  Eigenpairs inner = lapackSmallest(hm.bottomRightCorner(n - 1, n - 1), requested);

  Matrix padded = Matrix::Zero(n, count);
  padded.bottomRows(n - 1) = inner.vectors.leftCols(count);
  return {inner.values.head(count), h.apply(padded)};
}

void removeMean(Matrix& v) { v.rowwise() -= v.colwise().mean(); }

// Shift-invert subspace iteration with Rayleigh-Ritz extraction.
Eigenpairs iterativeSmallest(const SparseMatrix& m, Index count, Deflation deflation, const EmbedOptions& options)
{
  const Index n = m.rows();
  const Index space = deflation == Deflation::constant ? n - 1 : n;
  const Index block = std::min(space, std::max<Index>(2 * count, count + 8));
  const double scale = m.diagonal().cwiseAbs().maxCoeff();

  Eigen::SparseMatrix<double> shifted = m;
  for (Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += 1e-10 * (scale > 0.0 ? scale : 1.0);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw NumericalError("sparse factorization of the shifted M failed");

  Rng rng(0x5eed);
  Matrix v(n, block);
  for (Index j = 0; j < block; ++j)
    for (Index i = 0; i < n; ++i) v(i, j) = rng.normal();

  for (int iter = 0; iter < options.maxIterations; ++iter) {
    v = solver.solve(v);
    if (solver.info() != Eigen::Success) throw NumericalError("shift-invert solve failed");
    if (deflation == Deflation::constant) removeMean(v);
    Eigen::HouseholderQR<Matrix> qr(v);
    v = qr.householderQ() * Matrix::Identity(n, block);

    const Matrix h = v.transpose() * (m * v);
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(0.5 * (h + h.transpose()));
    v = v * ritz.eigenvectors();
    const Vector values = ritz.eigenvalues();

    const Matrix lead = v.leftCols(count);
    const Matrix residual = m * lead - lead * values.head(count).asDiagonal();
    if (residual.colwise().norm().maxCoeff() <= options.tolerance * std::max(scale, 1e-300))
      return {values.head(count), lead};
  }
  throw NumericalError("iterative eigensolver did not converge");
}

// Power iteration; only the magnitude matters for the null-vector threshold.
double largestEigenvalue(const SparseMatrix& m)
{
  Rng rng(0x1a56e);
  Vector v(m.rows());
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  v.normalize();
  double value = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const Vector mv = m * v;
    const double next = v.dot(mv);
    const double len = mv.norm();
    if (!(len > 0.0)) return 0.0;
    v = mv / len;
    if (std::abs(next - value) <= 1e-6 * std::abs(next)) return next;
    value = next;
  }
  return value;
}

} // namespace

Eigenpairs smallestEigenpairs(const SparseMatrix& m, Index count, Deflation deflation, const EmbedOptions& options)
{
  const Index space = deflation == Deflation::constant ? m.rows() - 1 : m.rows();
  if (m.rows() != m.cols()) throw InvalidArgument("eigenproblem needs a square matrix");
  if (count < 1 || count > space) throw InvalidArgument("invalid eigenpair count");
  const bool dense = options.solver == EigenSolverKind::dense ||
                     (options.solver == EigenSolverKind::automatic && m.rows() <= kDenseEigenLimit);
  return dense ? denseSmallest(m, count, deflation) : iterativeSmallest(m, count, deflation, options);
}

Embedding embed(const SparseMatrix& w, Index d, const EmbedOptions& options)
{
  const Index n = w.rows();
  if (w.cols() != n) throw InvalidArgument("weight matrix must be square");
  if (d < 1 || d > n - 2)
    throw InvalidArgument("output dimension d = " + std::to_string(d) + " must satisfy 1 <= d <= N - 2");

  const Index components = supportComponents(w);
  if (components > 1)
    throw DisconnectedGraph("neighbor graph is disconnected (" + std::to_string(components) + " components)",
                            static_cast<std::size_t>(components));

  const SparseMatrix m = buildM(w);
  const Vector ones = Vector::Ones(n);
  const double constantValue = ones.dot(m * ones) / static_cast<double>(n);
  const double lambdaMax = largestEigenvalue(m);
  if (!(std::abs(constantValue) <= 1e-9 * lambdaMax))
    throw NumericalError("the constant vector is not a null vector of M; are the weight rows normalized?");

  Eigenpairs pairs = smallestEigenpairs(m, d, Deflation::constant, options);

  // eigenvalues reported as Rayleigh quotients through I - W
  Matrix y(n, d);
  Vector rq(d);
  for (Index j = 0; j < d; ++j) {
    y.col(j) = pairs.vectors.col(j).normalized();
    rq(j) = (y.col(j) - w * y.col(j)).squaredNorm();
  }
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return rq(a) < rq(b); });

  Embedding out;
  out.droppedEigenvalue = std::max(0.0, constantValue);
  out.y.resize(n, d);
  out.eigenvalues.resize(d);
  for (Index j = 0; j < d; ++j) {
    out.y.col(j) = y.col(order[static_cast<std::size_t>(j)]);
    out.eigenvalues(j) = rq(order[static_cast<std::size_t>(j)]);
  }
  detail::canonicalizeSigns(out.y);
  return out;
}

double phi(const Matrix& y, const SparseMatrix& w)
{
  if (y.rows() != w.rows() || w.rows() != w.cols())
    throw InvalidArgument("Phi: Y has " + std::to_string(y.rows()) + " rows but W is " +
                          std::to_string(w.rows()) + " x " + std::to_string(w.cols()));
  const Matrix residual = y - w * y;
  return residual.squaredNorm();
}

} // namespace ldrlle
