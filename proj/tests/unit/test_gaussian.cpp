#include "doctest.h"

#include <cmath>
#include <numbers>

#include "diffbody/error.hpp"
#include "diffbody/gaussian.hpp"
#include "diffbody/symmetry.hpp"

using namespace diffbody;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<PDMatrix> random_tuple(int n, int m, Rng& rng) {
  std::vector<PDMatrix> A;
  for (int i = 0; i <= m; ++i) A.push_back(PDMatrix::random(n, rng));
  return A;
}

// Tᵀ A T
PDMatrix congruence(const PDMatrix& A, const DenseMatrix& T) {
  const int n = A.n();
  DenseMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += T(a, i) * A(a, b) * T(b, j);
      out(i, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(i, j) = out(j, i);
  return PDMatrix(out);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("PD validation") {
  CHECK(kind_of([] { PDMatrix(DenseMatrix::from_rows({{1, 2}, {0, 1}})); }) == ErrorKind::DegenerateInput);
  CHECK(kind_of([] { PDMatrix(DenseMatrix::from_rows({{1, 2}, {2, 1}})); }) == ErrorKind::DegenerateInput);
  CHECK(PDMatrix(DenseMatrix::from_rows({{2, 1}, {1, 2}})).determinant() == doctest::Approx(3));
}

TEST_CASE("block determinant identity") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      Rng rng(static_cast<std::uint64_t>(10 * n + m));
      for (int t = 0; t < 100; ++t) {
        const auto r = det_identity_check(random_tuple(n, m, rng));
        CHECK(r.relative_error <= 1e-9);
        CHECK(r.holds);
      }
    }
  const DenseMatrix M = block_matrix_M(std::vector<PDMatrix>(3, PDMatrix::identity(1)));
  CHECK(M.to_rows() == std::vector<std::vector<double>>{{2, 1}, {1, 2}});
  const std::vector<PDMatrix> bad(2, PDMatrix(DenseMatrix::from_rows({{1, 0}, {0, 1e-14}})));
  CHECK(kind_of([&] { det_identity_check(bad); }) == ErrorKind::IllConditioned);
}

TEST_CASE("F_n never exceeds its bound") {
  for (auto [n, m] : {std::pair{1, 1}, {2, 2}, {3, 2}}) {
    const auto r = f_bound_probe(n, m, 10000, 3);
    CHECK(r.violations == 0);
    CHECK(r.max_ratio <= 1 + 1e-9);
    CHECK(r.equal_max_error <= 1e-9);
    CHECK(r.perturbed_max_ratio < 1);
  }
}

TEST_CASE("constant C(n, m) along both paths") {
  CHECK(schneider_constant(1, 1) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(schneider_constant(2, 1) == doctest::Approx(pi * pi).epsilon(1e-14));
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      CHECK(schneider_constant(n, m) == doctest::Approx(schneider_constant_via_optimum(n, m)).epsilon(1e-13));
}

TEST_CASE("functional MC reproduces C(n, m) on standard Gaussians") {
  for (auto [n, m] : {std::pair{1, 1}, {1, 2}, {2, 1}}) {
    const std::vector<FunctionInput> f(static_cast<std::size_t>(m + 1), GaussianSpec{1.0, PDMatrix::identity(n)});
    const auto r = functional_lhs_mc(f, 200000, 4);
    CHECK(r.lhs.agrees_with(schneider_constant(n, m)));
  }
}

TEST_CASE("functional LHS is invariant under linear maps and amplitude scaling") {
  Rng rng(5);
  const int n = 2, m = 2;
  std::vector<FunctionInput> f;
  std::vector<PDMatrix> A = random_tuple(n, m, rng);
  for (const auto& a : A) f.push_back(GaussianSpec{1.0, a});
  const DenseMatrix T = DenseMatrix::from_rows({{1.5, 0.3}, {-0.4, 0.8}});
  std::vector<FunctionInput> g;
  double amp = 0.3;
  for (const auto& a : A) {
    g.push_back(GaussianSpec{amp, congruence(a, T)});
    amp *= 4;
  }
  const auto a = functional_lhs_mc(f, 200000, 6), b = functional_lhs_mc(g, 200000, 7);
  CHECK(std::abs(a.lhs.value - b.lhs.value) <= 3 * std::hypot(a.lhs.std_error, b.lhs.std_error));
  CHECK(a.lhs.value <= a.constant + 3 * a.lhs.std_error);
}

TEST_CASE("grid polars follow the discrete Legendre transform") {
  const auto plateau = GridFunction::sample(1, 201, 2.0, [](const double* x) { return std::abs(x[0]) <= 1 ? 1.0 : 0.0; });
  for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5}) CHECK(polar_value(plateau, &x) == doctest::Approx(std::exp(-std::abs(x))));
  const auto r = functional_lhs_mc({plateau, plateau}, 200000, 8);
  CHECK(r.lhs.value == doctest::Approx(2).epsilon(0.02));
  CHECK(r.lhs.value < pi - 3 * r.lhs.std_error);
  const auto gauss = GridFunction::sample(1, 201, 8.0, [](const double* x) { return std::exp(-x[0] * x[0] / 2); });
  CHECK(functional_lhs_mc({gauss, gauss}, 100000, 9).lhs.value == doctest::Approx(pi).epsilon(0.01));
  const auto g2 = GridFunction::sample(2, 41, 6.0, [](const double* x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2); });
  const double origin[2] = {0.5, -1.0};
  CHECK(polar_value(g2, origin) == doctest::Approx(std::exp(-0.625)).epsilon(1e-2));
}

TEST_CASE("grid input errors") {
  CHECK(kind_of([] { GridFunction::sample(1, 11, 1.0, [](const double* x) { return x[0] > 0 ? 1.0 : 0.5; }); }) ==
        ErrorKind::NotEven);
  const auto spike = GridFunction::sample(1, 11, 1.0, [](const double* x) { return std::abs(x[0]) < 1e-9 ? 1.0 : 0.0; });
  CHECK(kind_of([&] { functional_lhs_mc({spike, spike}, 1000, 1); }) == ErrorKind::NonIntegrable);
  CHECK(kind_of([] { GridFunction{3, 5, 1.0, std::vector<double>(125, 1.0)}.validate(); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("m = 1 special forms") {
  const GaussianSpec std1{1.0, PDMatrix::identity(1)};
  const auto eq = m1_forms_check(std1, std1, 200000, 10);
  CHECK(eq.sharp.agrees_with(pi));
  CHECK(eq.product.agrees_with(pi));
  Rng rng(11);
  const GaussianSpec a{2.0, PDMatrix::random(2, rng)}, b{0.5, PDMatrix::random(2, rng)};
  const auto r = m1_forms_check(a, b, 200000, 12);
  CHECK(r.holds);
  CHECK(r.product.value <= r.sharp.value + 3 * std::hypot(r.product.std_error, r.sharp.std_error));
}

TEST_CASE("ellipsoid form and the l2 inclusion") {
  Rng rng(13);
  const auto B = random_tuple(2, 2, rng);
  const auto eq = ellipsoid_dual_l2_check(std::vector<PDMatrix>(3, B[1]));
  CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-9));
  const auto strict = ellipsoid_dual_l2_check(B);
  CHECK(strict.holds);
  CHECK(strict.lhs < strict.rhs);

  const VPolytope tri = convex_hull(std::vector<Point>{make_point({-1, -1}), make_point({2, -1}), make_point({-1, 2})});
  const BodyCollection K{2, 2, {Body::polytope(centered_cube(2)), Body::polytope(tri), Body::ball(2)}};
  const auto inc = dual_sum_inclusion_check(K, 5000, 14);
  CHECK(inc.tested == 5000);
  CHECK(inc.holds);
  const auto tight = dual_sum_inclusion_check(BodyCollection::uniform(Body::polytope(centered_cube(2)), 1), 100, 15);
  CHECK(tight.max_ratio == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("Schneider-Gaussian samples and normalizer") {
  const int n = 2, m = 2, d = 4;
  const DenseMatrix C = schneider_gaussian_covariance(n, m);
  const auto z = sample_schneider_gaussian(n, m, 100000, 16);
  const double N = static_cast<double>(z.size());
  for (int a = 0; a < d; ++a) {
    double mean = 0;
    for (const auto& s : z) mean += s[static_cast<std::size_t>(a)];
    mean /= N;
    CHECK(std::abs(mean) <= 3 * std::sqrt(C(a, a) / N));
    for (int b = 0; b < d; ++b) {
      double cov = 0;
      for (const auto& s : z) cov += s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(b)];
      cov /= N;
      const double se = std::sqrt((C(a, a) * C(b, b) + C(a, b) * C(a, b)) / N);
      CHECK(std::abs(cov - C(a, b)) <= 3 * se);
    }
  }
  for (int nn = 1; nn <= 3; ++nn)
    for (int mm = 1; mm <= 3; ++mm)
      CHECK(schneider_gaussian_normalizer(nn, mm) ==
            doctest::Approx(std::pow((mm + 1.0) / std::pow(2 * pi, mm), nn / 2.0)).epsilon(1e-12));
}

TEST_CASE("gradient of D^m psi") {
  for (const auto& psi : {test_constant(3), test_squared_norm(), test_cosine({0.7, -1.2})})
    CHECK(gradient_check(psi, 2, 2, 100, 17) <= 1e-5);
  const auto psi = test_squared_norm();
  const double x[2] = {1, 2};
  double g[2];
  dm_gradient(psi, 1, 2, x, g);
  // ∇ψ(x_i) - ∇ψ(-(x_1 + x_2)) = 2x_i + 6
  CHECK(g[0] == doctest::Approx(8));
  CHECK(g[1] == doctest::Approx(10));
  CHECK(dm_value(psi, 1, 2, x) == doctest::Approx(14));
}

TEST_CASE("Poincare-type probe") {
  const auto sq = poincare_probe(test_squared_norm(), 1, 1, 400000, 18);
  CHECK(sq.lhs == doctest::Approx(2).epsilon(0.02));
  CHECK(sq.rhs == doctest::Approx(3).epsilon(0.02));
  for (const auto& psi : {test_constant(2), test_squared_norm(), test_cosine({1.0, 0.5})}) {
    const auto r = poincare_probe(psi, 2, 2, 200000, 19);
    CHECK(r.holds);
    const auto fd = poincare_probe(psi, 2, 2, 20000, 20, true);
    CHECK(fd.holds);
  }
  const TestFunction odd{"linear", [](const double* x, int) { return x[0]; }, {}};
  CHECK(kind_of([&] { poincare_probe(odd, 2, 2, 100, 1); }) == ErrorKind::NotEven);
}
