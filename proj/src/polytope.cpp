#include "diffbody/polytope.hpp"

#include <algorithm>

#include "diffbody/error.hpp"

namespace diffbody {

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool operator<(const Halfspace& a, const Halfspace& b) {
  if (a.normal != b.normal) return lex_less(a.normal, b.normal);
  return a.offset < b.offset;
}

VPolytope VPolytope::from_canonical(int dim, std::vector<Point> vertices) {
  if (vertices.empty()) throw Error(ErrorKind::EmptyInput, "polytope without vertices");
  for (const auto& v : vertices)
    if (static_cast<int>(v.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "vertex of wrong dimension");
  VPolytope p;
  p.dim_ = dim;
  p.vertices_ = std::move(vertices);
  return p;
}

HPolytope::HPolytope(int dim, std::vector<Halfspace> halfspaces, bool bounded)
    : dim_(dim), halfspaces_(std::move(halfspaces)), bounded_(bounded) {
  for (const auto& h : halfspaces_)
    if (static_cast<int>(h.normal.size()) != dim)
      throw Error(ErrorKind::DimensionMismatch, "halfspace normal of wrong dimension");
}

bool HPolytope::contains(const Point& x) const {
  for (const auto& h : halfspaces_)
    if (dot(h.normal, x) > h.offset) return false;
  return true;
}

bool HPolytope::contains_strictly(const Point& x) const {
  for (const auto& h : halfspaces_)
    if (dot(h.normal, x) >= h.offset) return false;
  return true;
}

bool HPolytope::contains(const std::vector<double>& x, double tol) const {
  for (const auto& h : halfspaces_) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += h.normal[i].get_d() * x[i];
    if (s > h.offset.get_d() + tol) return false;
  }
  return true;
}

Halfspace normalize_halfspace(const Point& normal, const Rational& offset) {
  Integer den_lcm = 1;
  for (const auto& c : normal) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  Integer g = 0;
  std::vector<Integer> ints;
  ints.reserve(normal.size());
  for (const auto& c : normal) {
    Integer v = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    ints.push_back(std::move(v));
  }
  if (g == 0) throw Error(ErrorKind::DegenerateInput, "zero halfspace normal");
  Halfspace h;
  h.normal.reserve(normal.size());
  for (auto& v : ints) h.normal.emplace_back(Integer(v / g));
  h.offset = offset * Rational(den_lcm, g);
  h.offset.canonicalize();
  return h;
}

}  // namespace diffbody
