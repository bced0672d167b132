#pragma once

#include <memory>
#include <variant>

#include "diffbody/estimate.hpp"
#include "diffbody/kernel.hpp"

namespace diffbody {

struct Ball {
  int dim = 0;
  Rational radius = 1;
  bool operator==(const Ball&) const = default;
};

/// A convex body: a full-dimensional polytope or a centered Euclidean ball.
class Body {
 public:
  static Body polytope(VPolytope P);
  static Body ball(int dim, Rational radius = 1);

  int dim() const;
  bool is_ball() const { return std::holds_alternative<Ball>(v_); }
  const VPolytope& poly() const;
  const Ball& as_ball() const;

  /// vol(K), exact for polytopes.
  Rational volume_exact() const;
  double volume() const;
  /// h_K(u) in floats (vertex max for polytopes, r|u| for balls).
  double support(const double* u) const;

  bool operator==(const Body& o) const { return v_ == o.v_; }

 private:
  std::variant<VPolytope, Ball> v_;
  std::shared_ptr<const FloatVRep> fv_;
};

struct BodyCollection {
  int n = 0;
  int m = 0;
  std::vector<Body> bodies;  // K_0, ..., K_m

  static BodyCollection uniform(const Body& K, int m);
  /// Throws DimensionMismatch unless there are m+1 bodies of dimension n.
  void validate() const;
  bool all_polytopes() const;
  /// All bodies are balls of one common radius.
  bool equal_balls() const;
};

/// Δ_m(v_0) + (-v_1, ..., -v_m) hulled over all vertex tuples.
VPolytope build_mdiff(const BodyCollection& K);

/// h_{K_0}(Σθ_i) + Σ h_{K_i}(-θ_i), exact. Throws BallUnsupported for balls.
Rational mdiff_support(const BodyCollection& K, const Point& theta);
double mdiff_support(const BodyCollection& K, const std::vector<double>& theta);

/// x ∈ D^m(K) iff K_0 ∩ ⋂ (K_i + x_i) ≠ ∅. LP for polytopes; for equal
/// balls of radius r, the smallest ball enclosing {0, x_1, ..., x_m} has
/// radius ≤ r.
bool mdiff_member(const BodyCollection& K, const Point& x);
bool mdiff_member(const BodyCollection& K, const std::vector<double>& x);

/// Membership oracle with the H-representations computed once; use this for
/// many queries against one collection.
class MdiffOracle {
 public:
  explicit MdiffOracle(const BodyCollection& K);
  bool contains(const Point& x) const;
  /// Float queries are rounded to the dyadic grid 2^-30 before the exact test.
  bool contains(const std::vector<double>& x) const;

 private:
  int n_, m_;
  bool balls_;
  Rational radius_sq_;
  double radius_sq_d_ = 0;
  std::vector<HPolytope> reps_;
};

/// Squared radius of the smallest ball enclosing the points, exact.
Rational miniball_radius_sq(const std::vector<Point>& pts);
double miniball_radius_sq(const std::vector<std::vector<double>>& pts);

/// Largest nm handled by exact hulls.
constexpr int kDefaultBudgetDim = 6;

/// S_{n,m}(K) = vol(D^m K) / vol(K)^m. Throws BudgetExceeded when
/// n·m > budget_dim.
Rational schneider_functional(const VPolytope& K, int m, int budget_dim = kDefaultBudgetDim);

/// Monte Carlo vol(D^m K) / vol(K)^m; works for balls.
Estimate schneider_functional_mc(const Body& K, int m, long samples, std::uint64_t seed);

/// (nm)×(n(m+1)) block matrix mapping (y_0, ..., y_m) to (y_0 - y_1, ..., y_0 - y_m).
Matrix projection_matrix(int n, int m);

/// Cartesian product K_0 × ... × K_m as a polytope in R^{n(m+1)}.
VPolytope product_polytope(const std::vector<VPolytope>& factors);

enum class MonotonicityMode { Exact, MonteCarlo };

struct MonotonicityVerdict {
  bool holds = false;
  MonotonicityMode mode = MonotonicityMode::Exact;
  /// S_{n,m+1}^m and S_{n,m}^{m+1}
  Rational lhs_exact, rhs_exact;
  Estimate lhs_mc, rhs_mc;
};

/// Checks S_{n,m+1}(K)^m ≤ S_{n,m}(K)^{m+1}. Exact mode throws BudgetExceeded
/// when n(m+1) > budget_dim; MC mode accepts with a 3σ guard.
MonotonicityVerdict monotonicity_check(const Body& K, int m, MonotonicityMode mode, long samples = 0,
                                       std::uint64_t seed = 0, int budget_dim = kDefaultBudgetDim);

}  // namespace diffbody
