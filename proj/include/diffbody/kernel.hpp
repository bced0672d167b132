#pragma once

#include <random>
#include <span>
#include <vector>

#include "diffbody/hull.hpp"
#include "diffbody/lp.hpp"
#include "diffbody/polytope.hpp"

namespace diffbody {

using Rng = std::mt19937_64;

/// Throws DegenerateInput if P is not full-dimensional.
Rational volume_exact(const VPolytope& P);
Point centroid(const VPolytope& P);

HPolytope facet_enum(const VPolytope& P);
/// Throws Unbounded if H is unbounded, DegenerateInput if it is empty or has
/// no interior.
VPolytope vertex_enum(const HPolytope& H);

/// Some point with slack in every constraint, or nullopt when the interior
/// is empty.
std::optional<Point> interior_point(const HPolytope& H);
/// LP certificate: max ±x_i is finite for every coordinate.
bool certify_bounded(const HPolytope& H);

VPolytope minkowski_sum(const VPolytope& P, const VPolytope& Q);

/// Extreme points of an arbitrary finite set, including sets whose affine
/// hull is lower-dimensional. Lexicographic order.
std::vector<Point> extreme_points(std::span<const Point> points);

/// Image of P under x ↦ Mx. With require_full_dim the image must be a body
/// in R^{rows(M)}; otherwise lower-dimensional images are re-hulled inside
/// their affine hull and returned as a (flat) vertex list.
VPolytope linear_image(const Matrix& M, const VPolytope& P, bool require_full_dim = true);

VPolytope translate(const VPolytope& P, const Point& t);
VPolytope scale(const VPolytope& P, const Rational& s);
/// True iff -P = P as vertex sets.
bool is_origin_symmetric(const VPolytope& P);

/// Hull of `points` random integer points in [-range, range]^dim, or of ±
/// each point when `symmetric`. Redraws until the hull is full-dimensional.
VPolytope random_polytope(int dim, int points, Rng& rng, int range = 6, bool symmetric = false);

struct SamplerOptions {
  int burn_in_per_dim = 10;          // hit-and-run steps per sample, times dim
  double min_rejection_rate = 1e-3;  // below this acceptance, switch to hit-and-run
};

/// Approximately uniform points. Rejection from the bounding box when its
/// acceptance rate is at least `min_rejection_rate`, hit-and-run otherwise.
std::vector<std::vector<double>> sample_uniform(const HPolytope& P, long count, Rng& rng,
                                                const SamplerOptions& opt = {});
std::vector<std::vector<double>> sample_uniform(const VPolytope& P, long count, Rng& rng,
                                                const SamplerOptions& opt = {});

/// Float copy of an H-representation for tight Monte Carlo loops.
struct FloatHRep {
  int dim = 0;
  std::vector<double> normals;  // row-major, size() * dim
  std::vector<double> offsets;
  explicit FloatHRep(const HPolytope& H);
  FloatHRep() = default;
  bool contains(const double* x, double tol = 0.0) const;
  std::size_t size() const { return offsets.size(); }
};

/// Max over vertices of ⟨v, u⟩, float.
struct FloatVRep {
  int dim = 0;
  std::vector<double> coords;
  explicit FloatVRep(const VPolytope& P);
  FloatVRep() = default;
  double support(const double* u) const;
};

}  // namespace diffbody
