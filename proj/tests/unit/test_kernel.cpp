#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <functional>

#include "diffbody/error.hpp"
#include "diffbody/lp.hpp"
#include "diffbody/symmetry.hpp"

using namespace diffbody;

namespace {

Matrix random_invertible(int n, Rng& rng) {
  std::uniform_int_distribution<long> c(-4, 4);
  for (;;) {
    Matrix m(static_cast<std::size_t>(n), Point(static_cast<std::size_t>(n)));
    for (auto& row : m)
      for (auto& x : row) x = Rational(c(rng), 1 + std::abs(c(rng)) % 3);
    if (determinant(m) != 0) return m;
  }
}

// Cramer's rule on a square rational system, or nullopt when singular.
std::optional<Point> solve(const Matrix& a, const Point& b) {
  const Rational d = determinant(a);
  if (d == 0) return std::nullopt;
  Point x;
  for (std::size_t k = 0; k < b.size(); ++k) {
    Matrix ak = a;
    for (std::size_t i = 0; i < b.size(); ++i) ak[i][k] = b[i];
    x.push_back(determinant(ak) / d);
  }
  return x;
}

}  // namespace

TEST_CASE("unit cube and simplex volumes") {
  CHECK(volume_exact(unit_cube(3)) == 1);
  CHECK(volume_exact(centered_cube(4)) == 16);
  const std::vector<Point> tri{make_point({0, 0}), make_point({1, 0}), make_point({0, 1})};
  CHECK(volume_exact(convex_hull(tri)) == Rational(1, 2));
  CHECK(centroid(convex_hull(tri)) == Point{Rational(1, 3), Rational(1, 3)});
}

TEST_CASE("volume scales by |det| under linear maps") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 3;
    const VPolytope P = random_polytope(d, 7, rng);
    const Matrix M = random_invertible(d, rng);
    CHECK(volume_exact(linear_image(M, P)) == abs(determinant(M)) * volume_exact(P));
  }
}

TEST_CASE("facet and vertex enumeration invert each other") {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 3;
    const VPolytope P = random_polytope(d, 6 + t % 5, rng);
    const HPolytope H = facet_enum(P);
    CHECK(vertex_enum(H) == P);
    CHECK(facet_enum(vertex_enum(H)) == H);
    CHECK(convex_hull(P.vertices()) == P);
  }
}

TEST_CASE("word and bignum hull kernels agree") {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const VPolytope P = random_polytope(4, 12, rng, 50);
    const Hull a = compute_hull(P.vertices());
    force_bignum_hull_kernel(true);
    const Hull b = compute_hull(P.vertices());
    force_bignum_hull_kernel(false);
    CHECK(a.polytope == b.polytope);
    CHECK(a.facets == b.facets);
    CHECK(a.volume == b.volume);
  }
}

TEST_CASE("degenerate and empty inputs are rejected") {
  const std::vector<Point> flat{make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0}),
                                make_point({1, 1, 0})};
  CHECK_THROWS_AS(compute_hull(flat), Error);
  CHECK_THROWS_AS(compute_hull(std::vector<Point>{}), Error);
  CHECK(extreme_points(flat).size() == 4);
  const HPolytope half(1, {{make_point({1}), 1}});
  try {
    vertex_enum(half);
    FAIL("unbounded region accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unbounded);
  }
}

TEST_CASE("lp_feasible agrees with vertex brute force") {
  Rng rng(14);
  std::uniform_int_distribution<long> c(-5, 5);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 2;
    std::vector<Halfspace> hs;
    for (int k = 0; k < d; ++k) {
      Point e = zero_point(d);
      e[static_cast<std::size_t>(k)] = 1;
      hs.push_back({e, 10});
      hs.push_back({negate(e), 10});
    }
    for (int r = 0; r < 4; ++r) {
      Point a;
      for (int k = 0; k < d; ++k) a.push_back(Rational(c(rng)));
      hs.push_back({a, Rational(c(rng) - 2)});
    }
    bool brute = false;
    std::vector<int> idx(static_cast<std::size_t>(d));
    const int rows = static_cast<int>(hs.size());
    std::function<void(int, int)> pick = [&](int pos, int from) {
      if (brute) return;
      if (pos == d) {
        Matrix a;
        Point b;
        for (int i : idx) {
          a.push_back(hs[static_cast<std::size_t>(i)].normal);
          b.push_back(hs[static_cast<std::size_t>(i)].offset);
        }
        if (auto x = solve(a, b)) {
          bool inside = true;
          for (const auto& h : hs) inside = inside && dot(h.normal, *x) <= h.offset;
          brute = inside;
        }
        return;
      }
      for (int i = from; i < rows; ++i) {
        idx[static_cast<std::size_t>(pos)] = i;
        pick(pos + 1, i + 1);
      }
    };
    pick(0, 0);
    const LpResult r = lp_feasible(d, hs);
    CHECK((r.status == LpStatus::Feasible) == brute);
    if (r.status == LpStatus::Feasible)
      for (const auto& h : hs) CHECK(dot(h.normal, r.x) <= h.offset);
  }
}

TEST_CASE("float simplex matches the exact optimum") {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const VPolytope P = random_polytope(3, 9, rng);
    const HPolytope H = facet_enum(P);
    std::vector<double> a, b;
    for (const auto& h : H.halfspaces()) {
      for (const auto& x : h.normal) a.push_back(x.get_d());
      b.push_back(h.offset.get_d());
    }
    const Point c = make_point({1, 2, -1});
    const std::vector<double> cf{1, 2, -1};
    const LpResult exact = lp_solve(3, H.halfspaces(), c);
    const FloatLpResult fl = lp_solve_float(3, a, b, &cf);
    REQUIRE(fl.status == LpStatus::Feasible);
    CHECK(fl.value == doctest::Approx(exact.value.get_d()).epsilon(1e-9));
  }
}

TEST_CASE("Minkowski sum of squares") {
  const VPolytope Q = unit_cube(2);
  CHECK(minkowski_sum(Q, Q) == scale(Q, 2));
  CHECK(volume_exact(minkowski_sum(Q, scale(Q, -1))) == 4);
}

TEST_CASE("rejection and hit-and-run samples are uniform in mean") {
  Rng rng(16);
  const VPolytope P = random_polytope(3, 9, rng);
  const HPolytope H = facet_enum(P);
  const auto c = to_double(centroid(P));
  for (double rate : {1e-3, 2.0}) {
    SamplerOptions opt;
    opt.min_rejection_rate = rate;  // 2.0 forces hit-and-run
    const auto pts = sample_uniform(H, 20000, rng, opt);
    for (int k = 0; k < 3; ++k) {
      double mean = 0, sq = 0;
      for (const auto& p : pts) {
        mean += p[static_cast<std::size_t>(k)];
        sq += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
      }
      mean /= static_cast<double>(pts.size());
      const double sd = std::sqrt(sq / static_cast<double>(pts.size()) - mean * mean);
      // iid standard error for rejection; hit-and-run chains get a wider band.
      const double band = (rate < 1 ? 3 : 10) * sd / std::sqrt(static_cast<double>(pts.size()));
      CHECK(std::abs(mean - c[static_cast<std::size_t>(k)]) <= band);
    }
    for (const auto& p : pts) CHECK(H.contains(p, 1e-9));
  }
}

TEST_CASE("hit-or-miss volume agrees with the exact volume") {
  Rng rng(17);
  const VPolytope P = random_polytope(3, 8, rng);
  const FloatHRep H(facet_enum(P));
  Moments mom = monte_carlo(200000, 5, 1, [&](Rng& r, double* out) {
    double x[3];
    for (double& v : x) v = std::uniform_real_distribution<double>(-6, 6)(r);
    out[0] = H.contains(x) ? 1728.0 : 0.0;
  });
  CHECK(mom.estimate(0, 5).agrees_with(volume_exact(P).get_d()));
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  auto draw = [](Rng& r, double* out) { out[0] = std::uniform_real_distribution<double>()(r); };
  setenv("DIFFBODY_WORKERS", "1", 1);
  const double a = monte_carlo(50000, 9, 1, draw).mean(0);
  setenv("DIFFBODY_WORKERS", "3", 1);
  const double b = monte_carlo(50000, 9, 1, draw).mean(0);
  unsetenv("DIFFBODY_WORKERS");
  CHECK(a == b);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(to_string(Rational(7, 1)) == "7");
  CHECK_THROWS_AS(parse_rational("1.5"), Error);
  CHECK_THROWS_AS(parse_rational("1e3"), Error);
  CHECK(from_double(0.375) == Rational(3, 8));
}
