#pragma once

#include "ldrlle/types.hpp"

namespace ldrlle::detail {

/// Flip each column so that its largest-magnitude entry (first one on ties) is positive.
inline void canonicalizeSigns(Matrix& columns)
{
  for (Index c = 0; c < columns.cols(); ++c) {
    Index best = 0;
    double bestAbs = -1.0;
    for (Index r = 0; r < columns.rows(); ++r) {
      const double a = std::abs(columns(r, c));
      if (a > bestAbs) {
        bestAbs = a;
        best = r;
      }
    }
    if (columns(best, c) < 0.0) columns.col(c) *= -1.0;
  }
}

} // namespace ldrlle::detail
