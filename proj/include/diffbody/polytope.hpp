#pragma once

#include <compare>
#include <vector>

#include "diffbody/rational.hpp"

namespace diffbody {

/// Bounded polytope given by its extreme points, kept in lexicographic order.
/// Instances built through convex_hull() are canonical, so `==` compares
/// polytopes as sets.
class VPolytope {
 public:
  VPolytope() = default;

  /// Wraps a vertex list the caller vouches for (extreme, lexicographically
  /// sorted, no duplicates). Use convex_hull() for arbitrary point sets.
  static VPolytope from_canonical(int dim, std::vector<Point> vertices);

  int dim() const noexcept { return dim_; }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }

  bool operator==(const VPolytope&) const = default;

 private:
  int dim_ = 0;
  std::vector<Point> vertices_;
};

/// ⟨normal, x⟩ ≤ offset.
struct Halfspace {
  Point normal;
  Rational offset;

  bool operator==(const Halfspace&) const = default;
};
bool operator<(const Halfspace& a, const Halfspace& b);

class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(int dim, std::vector<Halfspace> halfspaces, bool bounded = false);

  int dim() const noexcept { return dim_; }
  const std::vector<Halfspace>& halfspaces() const noexcept { return halfspaces_; }
  std::size_t size() const noexcept { return halfspaces_.size(); }
  /// Set only when boundedness has been certified (facet_enum output or an
  /// explicit LP check).
  bool bounded() const noexcept { return bounded_; }

  bool contains(const Point& x) const;
  bool contains_strictly(const Point& x) const;
  bool contains(const std::vector<double>& x, double tol = 0.0) const;

  bool operator==(const HPolytope&) const = default;

 private:
  int dim_ = 0;
  std::vector<Halfspace> halfspaces_;
  bool bounded_ = false;
};

/// Scales a halfspace so the normal is a primitive integer vector; the offset
/// stays rational. This is the canonical form used by facet_enum.
Halfspace normalize_halfspace(const Point& normal, const Rational& offset);

bool lex_less(const Point& a, const Point& b);

}  // namespace diffbody
