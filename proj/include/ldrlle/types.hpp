#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace ldrlle {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N x D sample, one point per row. All entries finite, N >= 1, D >= 1.
class PointCloud
{
public:
  explicit PointCloud(Matrix data);

  const Matrix& data() const { return mData; }
  Index size() const { return mData.rows(); }
  Index dim() const { return mData.cols(); }
  auto point(Index i) const { return mData.row(i); }

private:
  Matrix mData;
};

} // namespace ldrlle
