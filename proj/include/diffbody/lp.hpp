#pragma once

#include <optional>
#include <span>
#include <vector>

#include "diffbody/polytope.hpp"

namespace diffbody {

enum class LpStatus { Feasible, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Point x;          // witness, or maximizer when an objective was given
  Rational value;   // objective value at x
};

/// Exact dictionary simplex over free variables x ∈ R^dim subject to
/// ⟨a, x⟩ ≤ b. Bland's rule throughout, so it terminates on degenerate
/// systems. With an objective the result maximizes ⟨c, x⟩.
LpResult lp_solve(int dim, std::span<const Halfspace> constraints, const std::optional<Point>& objective = std::nullopt);

/// Same as lp_solve, but an unbounded objective throws Unbounded.
LpResult lp_feasible(int dim, std::span<const Halfspace> constraints,
                     const std::optional<Point>& objective = std::nullopt);

struct FloatLpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double value = 0;
};

/// The same simplex in doubles with a 1e-9 pivot tolerance, for estimators
/// and as a prefilter before exact tests. `a` is row-major rows × dim.
FloatLpResult lp_solve_float(int dim, const std::vector<double>& a, const std::vector<double>& b,
                             const std::vector<double>* objective = nullptr);

}  // namespace diffbody
