#pragma once

#include "ldrlle/types.hpp"

#include <string>

namespace ldrlle {

/// K nearest neighbors of every point, self excluded, ordered by increasing
/// distance; equidistant candidates are ordered by index.
struct NeighborGraph
{
  Index k = 0;
  IndexMatrix indices; // N x K

  Index size() const { return indices.rows(); }
};

/// Neighborhood of point i centered on it: row j is eta_j - x_i.
struct NeighborhoodMatrix
{
  Index center = 0;
  Matrix rows;       // K x D
  double radius = 0; // max row norm
};

/// Exact brute-force K-NN under the Euclidean metric. Requires 1 <= K <= N-1.
NeighborGraph knn(const PointCloud& cloud, Index k);

NeighborhoodMatrix neighborhoodMatrix(const PointCloud& cloud, const NeighborGraph& graph, Index i);

/// Wraps an already centered K x D matrix; the radius is filled in.
NeighborhoodMatrix makeNeighborhood(Matrix rows, Index center = 0);

/// One CSV row of neighbor indices per point.
std::string formatGraphCsv(const NeighborGraph& graph);

} // namespace ldrlle
