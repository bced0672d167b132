#pragma once

#include <span>
#include <vector>

#include "diffbody/polytope.hpp"

namespace diffbody {

/// Everything one beneath-beyond pass produces. Computing a 6-dimensional hull
/// is the expensive step of most pipelines, so callers that need more than one
/// of these facts should keep the whole record.
struct Hull {
  VPolytope polytope;  // extreme points, lexicographic
  HPolytope facets;    // irredundant, primitive integer normals, sorted
  Rational volume;
  Point centroid;

  /// Boundary triangulation: every simplex lists `dim` indices into
  /// `support_points`. Coplanar pieces of one facet share its hyperplane and
  /// some support points may be non-extreme.
  std::vector<Point> support_points;
  std::vector<std::vector<int>> boundary_simplices;
  /// Index into facets.halfspaces() for each boundary simplex.
  std::vector<int> simplex_facet;
};

/// Incremental beneath-beyond hull. Points are deduplicated and inserted in
/// lexicographic order; a point lying on the hyperplane of a facet counts as
/// beneath it, which is the symbolic-perturbation rule that keeps the
/// triangulation valid on degenerate input. Exact throughout: coordinates are
/// scaled to integers and processed with 64-bit words when a Hadamard bound
/// proves that no intermediate can overflow, and with GMP integers otherwise.
///
/// Throws EmptyInput, DimensionMismatch, or DegenerateInput when the affine
/// hull is not full-dimensional.
Hull compute_hull(std::span<const Point> points);

VPolytope convex_hull(std::span<const Point> points);

/// Counts of integer-kernel selections, for diagnostics and tests.
struct HullKernelStats {
  long word_kernel_runs = 0;
  long bignum_kernel_runs = 0;
};
HullKernelStats hull_kernel_stats();
/// Testing hook: when true every hull runs on GMP integers.
void force_bignum_hull_kernel(bool on);

}  // namespace diffbody
