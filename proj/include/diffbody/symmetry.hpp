#pragma once

#include "diffbody/polar.hpp"

namespace diffbody {

/// Steiner symmetral along a rational direction (not normalized). For
/// constraints with ⟨a, v⟩ > 0 (upper) and < 0 (lower) the chord through x
/// has half-length ½[min_upper (b - ⟨a,x⟩)/⟨a,v⟩ - max_lower ...]; each
/// upper/lower pair gives two halfspaces of the symmetral.
VPolytope steiner_symmetral(const VPolytope& P, const Point& v);

/// [0,1]^n and [-1,1]^n.
VPolytope unit_cube(int n);
VPolytope centered_cube(int n);
/// Symmetral of [-1,1]^3 along (1,1,1).
VPolytope c3_body();

struct SteinerCounterexample {
  Rational s_cube;
  Rational s_sym;
  Rational increase;
  bool strict_increase = false;
};
SteinerCounterexample steiner_counterexample(int m = 2, int budget_dim = kDefaultBudgetDim);

/// {(p, w) : A p + B w ≤ c} projected to p. Fiber symmetrals of polytopes
/// are exactly such projections, so compositions stay inside the class.
class LiftedPolytope {
 public:
  LiftedPolytope(int dim, int aux, std::vector<Halfspace> rows);
  static LiftedPolytope from(const HPolytope& H);

  int dim() const { return dim_; }
  int aux() const { return aux_; }
  const std::vector<Halfspace>& rows() const { return rows_; }

  /// Exact. A float LP proposes a witness with slack, which is verified
  /// exactly; only unverified points fall through to the rational LP.
  bool contains(const Point& p) const;
  /// max ⟨u, p⟩; throws Unbounded.
  Rational support(const Point& u) const;
  /// max t with t·u in the set, for u ≠ 0 and the origin inside.
  Rational radial(const Point& u) const;

  /// Float counterparts for estimators.
  bool contains_float(const std::vector<double>& p) const;
  double support_float(const std::vector<double>& u) const;
  double radial_float(const std::vector<double>& u) const;

 private:
  int dim_, aux_;
  std::vector<Halfspace> rows_;
  std::vector<double> fa_, fb_;  // float rows, (dim + aux) wide
};

/// p = x + v q^T with x ∈ v^{⊥m}: q_i = ⟨p_i, v⟩/|v|².
Point fiber_coordinates(const Point& p, const Point& v);

/// The usual m-th order fiber symmetral and its adjoint, in R^{nm} with
/// n = v.size().
LiftedPolytope fiber_symmetral(const LiftedPolytope& L, const Point& v);
LiftedPolytope adjoint_fiber_symmetral(const LiftedPolytope& L, const Point& v);

/// Membership in S̄_v L (adjoint = false) or in the adjoint symmetral.
bool fiber_member(const VPolytope& L, const Point& v, const Point& p, bool adjoint);

/// vol(B^d)·E[ρ_L(u)^d] over uniform directions, float radial LPs. The
/// origin must be interior.
Estimate lifted_volume_mc(const LiftedPolytope& L, long samples, std::uint64_t seed);
/// vol(B^d)·E[h_L(u)^{-d}], the volume of L°.
Estimate lifted_polar_volume_mc(const LiftedPolytope& L, long samples, std::uint64_t seed);

/// Exact test of h_{S̄_v L}(y) ≤ 1 for L given by vertices. The support is
/// min over z ∈ v^{⊥m} of h_L(y/2 + z) + h_L(Ry/2 - z) with R the reflection
/// in v^{⊥m}; a float LP picks z, the bound is evaluated exactly, and the
/// exact support LP settles the remaining cases.
bool in_polar_of_fiber_symmetral(const VPolytope& L, const LiftedPolytope& sym, const Point& v, const Point& y);

struct FiberProbeReport {
  long inclusion_tested = 0;       // (a) points of the adjoint symmetral of L°
  long inclusion_failures = 0;
  Estimate polar_sym_volume;       // (b) vol((S̄_v L)°)
  Rational polar_volume;           //     vol(L°)
  bool polar_volume_holds = false;
  Estimate sym_volume;             // vol(S̄_v L)
  Rational volume;                 // vol(L)
  bool volume_holds = false;
  long mdiff_tested = 0;           // (c) points of D^m(S_v K) in S̄_v(D^m K)
  long mdiff_failures = 0;
};

/// Checks for an origin-symmetric L ⊂ R^{nm}. If `K` is given (L = D^m(K)),
/// also samples D^m(S_v K) and tests membership in S̄_v(D^m K). Throws
/// NotOriginSymmetric.
FiberProbeReport fiber_polar_inclusion_probe(const VPolytope& L, const Point& v, long samples, std::uint64_t seed,
                                             const VPolytope* K = nullptr);

/// vol(S̄_{v_k}∘…∘S̄_{v_1} L)^{1/(nm)} / vol(L)^{1/(nm)} for k = 1..directions.size().
std::vector<Estimate> c0_probe(const VPolytope& L, const std::vector<Point>& directions, long samples,
                               std::uint64_t seed);

struct ShadowSystemSpec {
  VPolytope base;
  Point direction;
  std::vector<Rational> speeds;  // one per base vertex
  Rational t_min = -1, t_max = 1;
  void validate() const;
};

/// conv{x_i + α_i t v}; may be lower-dimensional.
std::vector<Point> shadow_system_points(const ShadowSystemSpec& spec, const Rational& t);
VPolytope shadow_system_at(const ShadowSystemSpec& spec, const Rational& t);

struct ShadowProbeReport {
  std::vector<Rational> grid;
  std::vector<Rational> volumes;            // exact vol(K(t)), 0 when flat
  bool volume_convex = false;
  std::vector<Estimate> inverse_polar;      // 1/vol(D^{m,∘}(K(t)))
  std::vector<double> second_differences;
  std::vector<double> second_difference_errors;
  std::vector<bool> skipped;                // origin not interior at t
  bool polar_convex = false;
  bool polar_checked = false;
};

/// Origin-symmetric base with α(-x) = -α(x), so every K(t) is symmetric.
bool symmetric_speeds(const ShadowSystemSpec& spec);

/// Exact midpoint convexity of vol(K(t)) on an odd grid, and 3σ midpoint
/// convexity of 1/vol(D^{m,∘}(K(t))) when m > 0 and the speeds are symmetric
/// (common random numbers across the grid, delta-method errors). Grid points
/// whose body misses the origin in its interior are marked skipped.
ShadowProbeReport shadow_convexity_probe(const ShadowSystemSpec& spec, int grid_points, int m, long samples,
                                         std::uint64_t seed);

/// Facet vector areas of a 3-polytope: area(F)·n_F, exact. Parallel
/// generators are merged.
std::vector<Point> projection_generators(const VPolytope& P);
/// Σ_F [-g_F/2, g_F/2].
VPolytope projection_body_3d(const VPolytope& P);
/// vol(ΠP) / vol(P)^2.
Rational petty_product(const VPolytope& P);
double petty_product_ball();  // 3π²/4

/// Σ over d-subsets of |det|: the volume of Σ [0, g_i] in R^d.
Rational zonotope_volume(const std::vector<Point>& generators);
VPolytope zonotope(const std::vector<Point>& generators);
/// S_{3,2} of the zonotope Σ [0, g_i] via the generator formula for D².
Rational zonotope_schneider_32(const std::vector<Point>& generators);

struct EliVerdict {
  Rational lhs;  // 4 S_{3,2}(K)
  Rational rhs;  // 84 + 3 P_3(K)
  Rational schneider;
  Rational petty;
  bool equal = false;
};
/// Throws NotOriginSymmetric, BudgetExceeded.
EliVerdict eli_identity_check(const VPolytope& K, int budget_dim = kDefaultBudgetDim);

}  // namespace diffbody
