#include "ldrlle/neighbors.hpp"
#include "ldrlle/errors.hpp"

#include <algorithm>
#include <vector>

namespace ldrlle {

NeighborGraph knn(const PointCloud& cloud, Index k)
{
  const Index n = cloud.size();
  if (k < 1) throw InvalidArgument("K must be at least 1");
  if (k >= n)
    throw InvalidArgument("K = " + std::to_string(k) + " must be smaller than the number of points (" +
                          std::to_string(n) + ")");

  const Matrix& x = cloud.data();

  NeighborGraph graph{k, IndexMatrix(n, k)};
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));

  for (Index i = 0; i < n; ++i) {
    // explicit differences, not the |a|^2 - 2ab + |b|^2 expansion
    for (Index j = 0; j < n; ++j) dist[static_cast<std::size_t>(j)] = (x.row(j) - x.row(i)).squaredNorm();
    order.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    auto closer = [&](Index a, Index b) {
      const double da = dist[static_cast<std::size_t>(a)], db = dist[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    for (Index j = 0; j < k; ++j) graph.indices(i, j) = order[static_cast<std::size_t>(j)];
  }
  return graph;
}

NeighborhoodMatrix makeNeighborhood(Matrix rows, Index center)
{
  NeighborhoodMatrix nb{center, std::move(rows), 0.0};
  nb.radius = nb.rows.rows() ? nb.rows.rowwise().norm().maxCoeff() : 0.0;
  return nb;
}

NeighborhoodMatrix neighborhoodMatrix(const PointCloud& cloud, const NeighborGraph& graph, Index i)
{
  if (i < 0 || i >= graph.size() || graph.size() != cloud.size())
    throw InvalidArgument("point index " + std::to_string(i) + " out of range");
  Matrix rows(graph.k, cloud.dim());
  for (Index j = 0; j < graph.k; ++j) rows.row(j) = cloud.point(graph.indices(i, j)) - cloud.point(i);
  return makeNeighborhood(std::move(rows), i);
}

std::string formatGraphCsv(const NeighborGraph& graph)
{
  std::string out;
  for (Index i = 0; i < graph.size(); ++i) {
    for (Index j = 0; j < graph.k; ++j) {
      if (j) out += ',';
      out += std::to_string(graph.indices(i, j));
    }
    out += '\n';
  }
  return out;
}

} // namespace ldrlle
