#pragma once

// Operation-count budgeting for the exact (enumerative) code paths.  Exact
// error/leakage/audit computations iterate over |B|^n or |C|^n sequence
// spaces; every such loop estimates its cost up front and refuses to start
// if it would exceed the caller's budget, so a typo in n fails fast instead
// of hanging the process.

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace avwc {

// Thrown when an exact enumeration would exceed the operation budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Default per-call operation budget; override globally with AVWC_BUDGET.
inline double default_budget() {
  if (const char* s = std::getenv("AVWC_BUDGET")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s && v > 0.0) return v;
  }
  return 1e8;
}

inline void check_budget(double ops, double budget, const char* where) {
  if (!(ops <= budget)) {
    throw BudgetError(std::string(where) + ": exact enumeration needs ~" +
                      std::to_string(ops) + " ops but the budget is " +
                      std::to_string(budget) +
                      "; raise AVWC_BUDGET / the budget argument, or use a "
                      "Monte Carlo mode");
  }
}

}  // namespace avwc
