#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "glyphometrics/error.hpp"

namespace glyphometrics {

template <typename Scalar>
struct DtwResult {
  Scalar cost = 0;              // summed local cost along the optimal path
  std::size_t path_length = 0;  // number of aligned pairs on that path
};

/// Dynamic time warping between two sequences stored row-wise (one sample per
/// row, any number of columns). Local cost is the Euclidean distance between
/// rows; steps are (1,1), (1,0) and (0,1).
///
/// Among equal-cost paths the shortest is taken, so swapping the arguments
/// gives bit-identical results.
template <typename DerivedA, typename DerivedB>
DtwResult<typename DerivedA::Scalar> dtw(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = a.rows(), m = b.rows();
  if (n == 0 || m == 0) throw Error(ErrorCode::invalid_input, "dtw of an empty sequence");
  if (a.cols() != b.cols()) throw Error(ErrorCode::invalid_input, "dtw sequences differ in dimension");

  struct Cell {
    Scalar cost;
    std::size_t length;
  };
  const auto better = [](const Cell& x, const Cell& y) {
    return x.cost < y.cost || (x.cost == y.cost && x.length < y.length);
  };
  const Cell inf{std::numeric_limits<Scalar>::infinity(), 0};
  std::vector<Cell> prev(static_cast<std::size_t>(m) + 1, inf), cur(prev.size(), inf);
  prev[0] = {0, 0};
  for (Eigen::Index i = 1; i <= n; ++i) {
    cur[0] = inf;
    for (Eigen::Index j = 1; j <= m; ++j) {
      Cell best = prev[j - 1];
      if (better(prev[j], best)) best = prev[j];
      if (better(cur[j - 1], best)) best = cur[j - 1];
      const Scalar local = (a.row(i - 1) - b.row(j - 1)).norm();
      cur[j] = {best.cost + local, best.length + 1};
    }
    std::swap(prev, cur);
  }
  return {prev[m].cost, prev[m].length};
}

}  // namespace glyphometrics
