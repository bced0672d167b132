#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diffbody/error.hpp"
#include "diffbody/symmetry.hpp"

using namespace diffbody;

namespace {

Point random_direction(int d, Rng& rng) {
  std::uniform_int_distribution<long> c(-4, 4);
  for (;;) {
    Point v;
    for (int k = 0; k < d; ++k) v.push_back(Rational(c(rng), 1 + std::abs(c(rng))));
    if (dot(v, v) != 0) return v;
  }
}

std::vector<Point> face_diagonals() {
  return {make_point({1, 1, 0}), make_point({1, -1, 0}), make_point({1, 0, 1}),
          make_point({1, 0, -1}), make_point({0, 1, 1}), make_point({0, 1, -1})};
}

std::vector<Point> axes() { return {make_point({1, 0, 0}), make_point({0, 1, 0}), make_point({0, 0, 1})}; }

std::vector<Point> body_diagonals() {
  return {make_point({1, 1, 1}), make_point({1, 1, -1}), make_point({1, -1, 1}), make_point({1, -1, -1})};
}

ShadowSystemSpec random_shadow(int d, Rng& rng) {
  std::uniform_int_distribution<long> c(-4, 4);
  ShadowSystemSpec s;
  s.base = random_polytope(d, 7, rng, 4);
  s.direction = random_direction(d, rng);
  for (std::size_t i = 0; i < s.base.size(); ++i) s.speeds.push_back(Rational(c(rng), 2));
  return s;
}

}  // namespace

TEST_CASE("C3 and the Steiner counterexample") {
  const VPolytope C = c3_body();
  CHECK(C.size() == 8);
  CHECK(volume_exact(C) == 8);
  CHECK(is_origin_symmetric(C));
  CHECK(std::find(C.vertices().begin(), C.vertices().end(), make_point({1, 1, 1})) != C.vertices().end());
  const auto r = steiner_counterexample();
  CHECK(r.s_cube == 27);
  CHECK(r.s_sym == Rational(111, 4));
  CHECK(r.increase == Rational(3, 4));
  CHECK(r.strict_increase);
}

TEST_CASE("Steiner symmetrization preserves volume and is idempotent") {
  Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    const VPolytope P = random_polytope(3, 6 + t % 6, rng);
    const Point v = random_direction(3, rng);
    const VPolytope S = steiner_symmetral(P, v);
    CHECK(volume_exact(S) == volume_exact(P));
    CHECK(steiner_symmetral(S, v) == S);
    CHECK(steiner_symmetral(P, scale(v, Rational(-5, 2))) == S);
  }
}

TEST_CASE("fiber membership at m = 1 is Steiner membership") {
  Rng rng(42);
  for (int t = 0; t < 3; ++t) {
    const int d = 2 + t % 2;
    const VPolytope P = random_polytope(d, 7, rng, 3);
    const Point v = random_direction(d, rng);
    const HPolytope S = facet_enum(steiner_symmetral(P, v));
    long inside = 0;
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> x(static_cast<std::size_t>(d));
      for (auto& c : x) c = std::uniform_real_distribution<double>(-4, 4)(rng);
      const Point p = dyadic_round(x, 6);
      const bool a = S.contains(p);
      CHECK(fiber_member(P, v, p, false) == a);
      inside += a;
    }
    CHECK(inside > 20);
  }
}

TEST_CASE("lifted polytope oracles") {
  const LiftedPolytope L = LiftedPolytope::from(facet_enum(centered_cube(2)));
  CHECK(L.contains(make_point({1, -1})));
  CHECK_FALSE(L.contains(Point{Rational(3, 2), Rational(0)}));
  CHECK(L.support(make_point({1, 2})) == 3);
  CHECK(L.radial(make_point({2, 1})) == Rational(1, 2));
  CHECK(L.support_float({1, 2}) == doctest::Approx(3));
  // The symmetral of a D^2 body along v lies in R^4 and contains its origin.
  const VPolytope D = build_mdiff(BodyCollection::uniform(Body::polytope(centered_cube(2)), 2));
  const LiftedPolytope S = fiber_symmetral(LiftedPolytope::from(facet_enum(D)), make_point({2, 1}));
  CHECK(S.dim() == 4);
  CHECK(S.contains(zero_point(4)));
  CHECK(lifted_volume_mc(LiftedPolytope::from(facet_enum(D)), 20000, 3).agrees_with(volume_exact(D).get_d()));
}

TEST_CASE("fiber symmetrization probes") {
  const VPolytope K = centered_cube(2);
  const VPolytope L = build_mdiff(BodyCollection::uniform(Body::polytope(K), 2));
  const auto r = fiber_polar_inclusion_probe(L, make_point({2, 1}), 2000, 5, &K);
  CHECK(r.inclusion_tested > 0);
  CHECK(r.inclusion_failures == 0);
  CHECK(r.mdiff_tested == 2000);
  CHECK(r.mdiff_failures == 0);
  CHECK(r.volume_holds);
  CHECK(r.polar_volume_holds);
  const auto c0 = c0_probe(L, {make_point({2, 1}), make_point({1, -3})}, 4000, 6);
  REQUIRE(c0.size() == 2);
  for (const auto& e : c0) CHECK(e.value >= 1 - 3 * e.std_error);
  const VPolytope T = convex_hull(std::vector<Point>{make_point({0, 0}), make_point({1, 0}), make_point({0, 1})});
  const VPolytope DT = build_mdiff(BodyCollection::uniform(Body::polytope(T), 2));
  CHECK_THROWS_AS(fiber_polar_inclusion_probe(DT, make_point({1, 0}), 100, 1), Error);
}

TEST_CASE("shadow system volumes are convex") {
  Rng rng(43);
  for (int t = 0; t < 10; ++t) {
    const auto spec = random_shadow(2 + t % 2, rng);
    const auto r = shadow_convexity_probe(spec, 7, 0, 0, 1);
    CHECK(r.grid.size() == 7);
    CHECK(r.volume_convex);
  }
  ShadowSystemSpec bad = random_shadow(2, rng);
  bad.speeds.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("inverse polar volume is midpoint convex on a symmetric shadow system") {
  ShadowSystemSpec s;
  s.base = convex_hull(std::vector<Point>{make_point({2, 1}), make_point({1, 2}), make_point({-1, 2}), make_point({-2, 1}),
                                          make_point({-2, -1}), make_point({-1, -2}), make_point({1, -2}),
                                          make_point({2, -1})});
  s.direction = make_point({1, 1});
  for (const auto& v : s.base.vertices()) s.speeds.push_back(v[0] + v[1] > 0 ? Rational(1, 2) : Rational(-1, 2));
  s.t_min = Rational(-1, 2);
  s.t_max = Rational(1, 2);
  REQUIRE(symmetric_speeds(s));
  const auto r = shadow_convexity_probe(s, 5, 2, 100000, 2);
  CHECK(r.volume_convex);
  CHECK(r.polar_checked);
  CHECK(r.polar_convex);
}

TEST_CASE("projection bodies and Petty products") {
  CHECK(petty_product(unit_cube(3)) == 8);
  CHECK(volume_exact(projection_body_3d(centered_cube(3))) == 64 * 8);
  CHECK(petty_product(c3_body()) == 9);
  CHECK(volume_exact(projection_body_3d(c3_body())) == 576);
  auto with = [](std::vector<Point> a, const std::vector<Point>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const std::vector<std::vector<Point>> refinement{face_diagonals(), with(axes(), face_diagonals()),
                                                   with(with(axes(), face_diagonals()), body_diagonals())};
  double last = 8;
  for (const auto& gens : refinement) {
    const double p = petty_product(zonotope(gens)).get_d();
    CHECK(p < last);
    CHECK(p > petty_product_ball());
    last = p;
  }
  CHECK(petty_product_ball() == doctest::Approx(3 * std::numbers::pi * std::numbers::pi / 4));
}

TEST_CASE("zonotope volume and the generator route for S_{3,2}") {
  std::vector<Point> gens = axes();
  gens.push_back(make_point({1, 1, 1}));
  const VPolytope Z = zonotope(gens);
  CHECK(zonotope_volume(gens) == volume_exact(Z));
  CHECK(zonotope_schneider_32(gens) == schneider_functional(Z, 2));
  Rng rng(44);
  for (int t = 0; t < 2; ++t) {
    std::vector<Point> g;
    for (int k = 0; k < 4; ++k) g.push_back(random_direction(3, rng));
    if (rank(g) < 3) continue;
    CHECK(zonotope_volume(g) == volume_exact(zonotope(g)));
    const auto e = eli_identity_check(translate(zonotope(g), negate(centroid(zonotope(g)))));
    CHECK(e.schneider == zonotope_schneider_32(g));
  }
}

TEST_CASE("Eli identity on symmetric bodies") {
  for (const VPolytope& K : {centered_cube(3), c3_body()}) {
    const auto e = eli_identity_check(K);
    CHECK(e.equal);
    CHECK(e.lhs == e.rhs);
  }
  Rng rng(45);
  for (int t = 0; t < 2; ++t) {
    const VPolytope K = random_polytope(3, 4, rng, 4, true);
    const auto e = eli_identity_check(K);
    CHECK(e.equal);
  }
  CHECK_THROWS_AS(eli_identity_check(unit_cube(3)), Error);
}
