#include "doctest.h"

#include "diffbody/error.hpp"
#include "diffbody/symmetry.hpp"

using namespace diffbody;

namespace {

VPolytope simplex(int n) {
  std::vector<Point> pts{zero_point(n)};
  for (int k = 0; k < n; ++k) {
    Point e = zero_point(n);
    e[static_cast<std::size_t>(k)] = 1;
    pts.push_back(e);
  }
  return convex_hull(pts);
}

Rational binom(int a, int b) {
  Rational r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

Point dyadic_box_point(int d, double half, Rng& rng) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (auto& v : x) v = std::uniform_real_distribution<double>(-half, half)(rng);
  return dyadic_round(x, 8);
}

BodyCollection uniform(const VPolytope& K, int m) { return BodyCollection::uniform(Body::polytope(K), m); }

}  // namespace

TEST_CASE("exact Schneider values") {
  CHECK(volume_exact(build_mdiff(uniform(unit_cube(1), 2))) == 3);
  CHECK(schneider_functional(simplex(2), 2) == 15);
  CHECK(schneider_functional(unit_cube(3), 2) == 27);
  for (int m = 1; m <= 4; ++m) CHECK(schneider_functional(unit_cube(1), m) == m + 1);
}

TEST_CASE("budget is enforced") {
  try {
    schneider_functional(unit_cube(3), 3);
    FAIL("nm = 9 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  CHECK(schneider_functional(unit_cube(2), 2, 4) == schneider_functional(unit_cube(2), 2));
}

TEST_CASE("Schneider functional is affine invariant") {
  Rng rng(21);
  std::uniform_int_distribution<long> c(-5, 5);
  const VPolytope T = simplex(2);
  const VPolytope P = random_polytope(2, 7, rng);
  const Rational sT = schneider_functional(T, 2), sP = schneider_functional(P, 2);
  for (int t = 0; t < 50; ++t) {
    Matrix M;
    do {
      M = {{Rational(c(rng), 3), Rational(c(rng))}, {Rational(c(rng)), Rational(c(rng), 2)}};
    } while (determinant(M) == 0);
    const Point shift{Rational(c(rng), 7), Rational(c(rng), 11)};
    CHECK(schneider_functional(translate(linear_image(M, T), shift), 2) == sT);
    if (t < 10) CHECK(schneider_functional(translate(linear_image(M, P), shift), 2) == sP);
  }
}

TEST_CASE("hull membership agrees with the LP oracle") {
  Rng rng(22);
  const std::vector<BodyCollection> cases{uniform(simplex(2), 2), uniform(random_polytope(2, 6, rng, 3), 2),
                                          BodyCollection{2, 1, {Body::polytope(unit_cube(2)), Body::polytope(simplex(2))}}};
  for (const auto& K : cases) {
    const HPolytope H = facet_enum(build_mdiff(K));
    const MdiffOracle oracle(K);
    long inside = 0;
    for (int t = 0; t < 10000; ++t) {
      const Point x = dyadic_box_point(K.n * K.m, 2, rng);
      const bool a = H.contains(x);
      CHECK(a == oracle.contains(x));
      inside += a;
    }
    CHECK(inside > 100);
  }
  const BodyCollection K = uniform(simplex(2), 2);
  const VPolytope D = build_mdiff(K);
  for (const auto& v : D.vertices()) CHECK(mdiff_member(K, v));
}

TEST_CASE("support function is 1-homogeneous and subadditive") {
  Rng rng(23);
  std::uniform_int_distribution<long> c(-9, 9);
  const BodyCollection K{2, 2, {Body::polytope(simplex(2)), Body::polytope(unit_cube(2)), Body::polytope(random_polytope(2, 5, rng))}};
  const HPolytope H = facet_enum(build_mdiff(K));
  auto draw = [&] {
    Point p;
    for (int k = 0; k < 4; ++k) p.push_back(Rational(c(rng), 1 + std::abs(c(rng))));
    return p;
  };
  for (int t = 0; t < 200; ++t) {
    const Point a = draw(), b = draw();
    const Rational s(1 + std::abs(c(rng)), 3);
    CHECK(mdiff_support(K, scale(a, s)) == s * mdiff_support(K, a));
    CHECK(mdiff_support(K, add(a, b)) <= mdiff_support(K, a) + mdiff_support(K, b));
  }
  // Facet normals attain the offset.
  for (const auto& h : H.halfspaces()) CHECK(mdiff_support(K, h.normal) == h.offset);
}

TEST_CASE("translation invariance") {
  Rng rng(24);
  std::uniform_int_distribution<long> c(-9, 9);
  const VPolytope P = random_polytope(2, 6, rng);
  const VPolytope D = build_mdiff(uniform(P, 2));
  for (int t = 0; t < 20; ++t) {
    const Point shift{Rational(c(rng), 3), Rational(c(rng), 5)};
    CHECK(build_mdiff(uniform(translate(P, shift), 2)) == D);
  }
}

TEST_CASE("D^2 of a cube is a permuted product of interval bodies") {
  const VPolytope I = build_mdiff(uniform(unit_cube(1), 2));
  for (int n = 1; n <= 3; ++n) {
    const VPolytope prod = product_polytope(std::vector<VPolytope>(static_cast<std::size_t>(n), I));
    // product coordinates are (copy k, block i) at 2k + i; D^2 uses i·n + k
    Matrix perm(static_cast<std::size_t>(2 * n), Point(static_cast<std::size_t>(2 * n)));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < 2; ++i) perm[static_cast<std::size_t>(i * n + k)][static_cast<std::size_t>(2 * k + i)] = 1;
    CHECK(linear_image(perm, prod) == build_mdiff(uniform(unit_cube(n), 2)));
  }
}

TEST_CASE("Rogers-Shephard bound with equality on simplices") {
  Rng rng(25);
  struct Case {
    VPolytope K;
    int m;
    bool is_simplex;
  };
  std::vector<Case> cases{{unit_cube(1), 1, true}, {unit_cube(1), 3, true},   {simplex(2), 1, true},
                          {simplex(2), 2, true},   {simplex(3), 1, true},     {unit_cube(2), 2, false},
                          {unit_cube(3), 2, false}, {c3_body(), 1, false}};
  for (int t = 0; t < 4; ++t) cases.push_back({random_polytope(2, 6, rng), 2, false});
  for (const auto& c : cases) {
    const int n = c.K.dim();
    const Rational s = schneider_functional(c.K, c.m);
    const Rational bound = binom(n * c.m + n, n);
    CHECK(s <= bound);
    if (c.K.size() == static_cast<std::size_t>(n + 1)) CHECK(s == bound);
    else CHECK(s < bound);
    CHECK(c.is_simplex == (c.K.size() == static_cast<std::size_t>(n + 1)));
  }
}

TEST_CASE("monotonicity in m") {
  for (const VPolytope& K : {unit_cube(1), convex_hull(std::vector<Point>{make_point({0, 0}), make_point({1, 0}), make_point({0, 1})}),
                             unit_cube(2), unit_cube(3)})
    for (int m = 1; K.dim() * (m + 1) <= 6; ++m) {
      const auto v = monotonicity_check(Body::polytope(K), m, MonotonicityMode::Exact);
      CHECK(v.holds);
      CHECK(v.lhs_exact <= v.rhs_exact);
    }
  const auto mc = monotonicity_check(Body::ball(2), 1, MonotonicityMode::MonteCarlo, 40000, 3);
  CHECK(mc.holds);
}

TEST_CASE("balls use the miniball oracle") {
  const BodyCollection B = BodyCollection::uniform(Body::ball(2, 1), 2);
  CHECK(mdiff_member(B, Point{Rational(1), Rational(0), Rational(-1), Rational(0)}));
  CHECK_FALSE(mdiff_member(B, Point{Rational(3), Rational(0), Rational(0), Rational(0)}));
  CHECK_THROWS_AS(mdiff_support(B, Point(4, Rational(1))), Error);
  CHECK(miniball_radius_sq({make_point({0, 0}), make_point({2, 0}), make_point({1, 1})}) == 1);
  // S_{1,1}(segment) = 2 and a 1-ball is a segment.
  CHECK(schneider_functional_mc(Body::ball(1), 1, 40000, 4).agrees_with(2.0));
  CHECK(schneider_functional_mc(Body::polytope(unit_cube(2)), 2, 40000, 5).agrees_with(schneider_functional(unit_cube(2), 2).get_d()));
}

TEST_CASE("mismatched collections are rejected") {
  BodyCollection K{2, 2, {Body::polytope(unit_cube(2)), Body::polytope(unit_cube(3)), Body::polytope(unit_cube(2))}};
  CHECK_THROWS_AS(K.validate(), Error);
  K.bodies.pop_back();
  CHECK_THROWS_AS(build_mdiff(K), Error);
}
