#pragma once

// Dense two-phase primal simplex for the tiny linear programs arising in the
// degradedness feasibility check (at most a few hundred variables).  Bland's
// rule throughout, so it cannot cycle.  Solves
//     minimize c.x   subject to   A x = b,  x >= 0,
// and reports infeasibility when phase 1 cannot zero the artificials.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace avwc {

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

namespace lp_detail {

inline constexpr double kPivTol = 1e-11;

// One simplex phase on tableau T (rows m, cols n_total + 1 with the rhs
// last), given per-column costs.  basis[i] is the variable of row i.
// allowed[j] = false bars a column from entering (used to freeze artificials
// in phase 2).  Returns the attained objective for `costs`.
inline double run_phase(std::vector<std::vector<double>>& T,
                        std::vector<int>& basis, const std::vector<double>& costs,
                        const std::vector<char>& allowed) {
  const int m = static_cast<int>(T.size());
  const int ncols = static_cast<int>(T[0].size()) - 1;
  for (int iter = 0;; ++iter) {
    if (iter > 20000)
      throw std::runtime_error("simplex: iteration limit (unexpected at this size)");
    // Reduced costs r_j = c_j - y^T A_j with y from the current basis.
    // Computed directly from the tableau: r_j = c_j - sum_i c_basis[i] T[i][j].
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      double r = costs[static_cast<std::size_t>(j)];
      for (int i = 0; i < m; ++i) {
        const double cb = costs[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])];
        if (cb != 0.0) r -= cb * T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      if (r < -1e-9) {  // Bland: first improving column
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal for these costs

    // Ratio test; Bland tie-break on the smallest basis variable index.
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
      if (a > kPivTol) {
        const double ratio = T[static_cast<std::size_t>(i)].back() / a;
        if (leave < 0 || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0)
      throw std::runtime_error("simplex: unbounded (caller guarantees bounded)");

    // Pivot.
    auto& prow = T[static_cast<std::size_t>(leave)];
    const double piv = prow[static_cast<std::size_t>(enter)];
    for (double& v : prow) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      auto& rrow = T[static_cast<std::size_t>(i)];
      const double f = rrow[static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < rrow.size(); ++j) rrow[j] -= f * prow[j];
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  double obj = 0.0;
  for (int i = 0; i < m; ++i)
    obj += costs[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] *
           T[static_cast<std::size_t>(i)].back();
  return obj;
}

}  // namespace lp_detail

inline LpResult simplex_solve(const std::vector<std::vector<double>>& A,
                              std::vector<double> b, std::vector<double> c) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("simplex_solve: ragged constraint matrix");
  if (static_cast<int>(b.size()) != m)
    throw std::invalid_argument("simplex_solve: rhs size mismatch");

  // Tableau with one artificial per row; flip rows so b >= 0.
  const int ncols = n + m;
  std::vector<std::vector<double>> T(
      static_cast<std::size_t>(m),
      std::vector<double>(static_cast<std::size_t>(ncols) + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    const double sgn = b[static_cast<std::size_t>(i)] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j)
      T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          sgn * A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    T[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1.0;
    T[static_cast<std::size_t>(i)].back() = sgn * b[static_cast<std::size_t>(i)];
  }
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  // Phase 1: minimize the artificial mass.
  std::vector<double> phase1_costs(static_cast<std::size_t>(ncols), 0.0);
  for (int j = n; j < ncols; ++j) phase1_costs[static_cast<std::size_t>(j)] = 1.0;
  std::vector<char> all_allowed(static_cast<std::size_t>(ncols), 1);
  const double infeas = lp_detail::run_phase(T, basis, phase1_costs, all_allowed);
  LpResult res;
  if (infeas > 1e-7) return res;  // infeasible

  // Pivot any artificial still basic (at zero level) out on a real column.
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) >
          lp_detail::kPivTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) continue;  // redundant row; harmless to leave in place
    auto& prow = T[static_cast<std::size_t>(i)];
    const double piv = prow[static_cast<std::size_t>(enter)];
    for (double& v : prow) v /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == i) continue;
      auto& rrow = T[static_cast<std::size_t>(r)];
      const double f = rrow[static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < rrow.size(); ++j) rrow[j] -= f * prow[j];
    }
    basis[static_cast<std::size_t>(i)] = enter;
  }

  // Phase 2 on the true costs, artificials barred from entering.
  std::vector<double> phase2_costs(static_cast<std::size_t>(ncols), 0.0);
  for (int j = 0; j < n; ++j) phase2_costs[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  std::vector<char> allowed(static_cast<std::size_t>(ncols), 0);
  for (int j = 0; j < n; ++j) allowed[static_cast<std::size_t>(j)] = 1;
  res.value = lp_detail::run_phase(T, basis, phase2_costs, allowed);
  res.feasible = true;
  res.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    const int v = basis[static_cast<std::size_t>(i)];
    if (v < n) res.x[static_cast<std::size_t>(v)] = T[static_cast<std::size_t>(i)].back();
  }
  return res;
}

}  // namespace avwc
