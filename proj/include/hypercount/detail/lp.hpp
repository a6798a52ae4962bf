#pragma once

#include <vector>

namespace hypercount::detail {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

// maximize c.x subject to A x <= b, x >= 0. Dense two-phase simplex with
// Bland's rule; meant for the handful of variables of a graph's edges.
LpResult lp_maximize(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                     const std::vector<double>& b);

}  // namespace hypercount::detail
