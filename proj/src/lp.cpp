#include "hypercount/detail/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypercount::detail {

namespace {

constexpr double kEps = 1e-11;

struct Tableau {
  int rows, cols;  // cols excludes the right-hand side
  std::vector<double> t;
  std::vector<int> basis;
  double& at(int r, int c) { return t[r * (cols + 1) + c]; }
  double& rhs(int r) { return t[r * (cols + 1) + cols]; }

  void pivot(int pr, int pc, std::vector<double>& obj, double& obj_val) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols; ++c) t[pr * (cols + 1) + c] /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols; ++c) t[r * (cols + 1) + c] -= f * t[pr * (cols + 1) + c];
    }
    const double f = obj[pc];
    if (f != 0.0) {
      for (int c = 0; c < cols; ++c) obj[c] -= f * at(pr, c);
      obj_val += f * rhs(pr);
    }
    basis[pr] = pc;
  }

  // Maximizes obj (reduced costs, positive = improving). Columns with
  // allowed[c] == false never enter. Returns false when unbounded.
  bool run(std::vector<double>& obj, double& obj_val, const std::vector<char>& allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      int pc = -1;
      for (int c = 0; c < cols; ++c) {
        if (allowed[c] && obj[c] > kEps) {
          pc = c;
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        if (at(r, pc) > kEps) {
          const double ratio = rhs(r) / at(r, pc);
          if (ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis[r] < basis[pr])) {
            best = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return false;
      pivot(pr, pc, obj, obj_val);
    }
    throw std::runtime_error("simplex did not terminate");
  }
};

}  // namespace

LpResult lp_maximize(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                     const std::vector<double>& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.size());
  if (static_cast<int>(b.size()) != m) throw std::invalid_argument("lp_maximize: shape mismatch");
  int flipped = 0;
  for (double bi : b) flipped += bi < 0.0;
  // Columns: originals, one slack per row, one artificial per flipped row.
  Tableau tab{m, n + m + flipped, {}, {}};
  tab.t.assign(static_cast<std::size_t>(m) * (tab.cols + 1), 0.0);
  tab.basis.assign(m, -1);
  int art = n + m;
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(A[r].size()) != n) throw std::invalid_argument("lp_maximize: shape mismatch");
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.at(r, j) = sign * A[r][j];
    tab.at(r, n + r) = sign;
    tab.rhs(r) = sign * b[r];
    if (sign < 0.0) {
      tab.at(r, art) = 1.0;
      tab.basis[r] = art++;
    } else {
      tab.basis[r] = n + r;
    }
  }
  std::vector<char> allowed(tab.cols, 1);
  LpResult out;
  if (flipped > 0) {
    // Phase one: maximize minus the sum of artificials.
    std::vector<double> obj(tab.cols, 0.0);
    double val = 0.0;
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] >= n + m) {
        for (int j = 0; j < tab.cols; ++j) obj[j] += tab.at(r, j);
        val -= tab.rhs(r);
      }
    }
    for (int j = n + m; j < tab.cols; ++j) obj[j] = 0.0;
    tab.run(obj, val, allowed);
    if (val < -1e-9) return out;  // infeasible
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] < n + m) continue;
      for (int j = 0; j < n + m; ++j) {
        if (std::abs(tab.at(r, j)) > kEps) {
          std::vector<double> dummy(tab.cols, 0.0);
          double dv = 0.0;
          tab.pivot(r, j, dummy, dv);
          break;
        }
      }
    }
    for (int j = n + m; j < tab.cols; ++j) allowed[j] = 0;
  }
  std::vector<double> obj(tab.cols, 0.0);
  double val = 0.0;
  for (int j = 0; j < n; ++j) obj[j] = c[j];
  for (int r = 0; r < m; ++r) {
    const int bj = tab.basis[r];
    if (bj < n && c[bj] != 0.0) {
      const double f = obj[bj];
      for (int j = 0; j < tab.cols; ++j) obj[j] -= f * tab.at(r, j);
      val += f * tab.rhs(r);
    }
  }
  if (!tab.run(obj, val, allowed)) {
    out.status = LpResult::Status::Unbounded;
    return out;
  }
  out.status = LpResult::Status::Optimal;
  out.value = val;
  out.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) out.x[tab.basis[r]] = tab.rhs(r);
  return out;
}

}  // namespace hypercount::detail
