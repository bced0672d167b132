#include "diffbody/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "diffbody/error.hpp"

namespace diffbody {

namespace {

struct Outcome {
  bool pass = false;
  Json value;
  double error = 0;
  std::string reason;
};

struct Context {
  const SuiteConfig& config;
  std::uint64_t seed;
};

struct CheckDef {
  std::string suite, name, ref, tolerance;
  bool monte_carlo = false;
  std::function<Outcome(const Context&)> run;
};

std::uint64_t name_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
  return seed ^ h;
}

Outcome exact(bool pass, const Rational& value, std::string reason = {}) {
  return {pass, to_string(value), 0, pass ? std::string() : std::move(reason)};
}

Outcome estimate(bool pass, const Estimate& e, std::string reason = {}) {
  return {pass, e.value, e.std_error, pass ? std::string() : std::move(reason)};
}

Outcome number(bool pass, double v, std::string reason = {}) {
  return {pass, v, 0, pass ? std::string() : std::move(reason)};
}

VPolytope segment() { return unit_cube(1); }

VPolytope triangle() {
  const std::vector<Point> pts{make_point({0, 0}), make_point({1, 0}), make_point({0, 1})};
  return convex_hull(pts);
}

VPolytope hexagon() {
  const std::vector<Point> pts{make_point({1, 0}),  make_point({1, 1}),   make_point({0, 1}),
                               make_point({-1, 0}), make_point({-1, -1}), make_point({0, -1})};
  return convex_hull(pts);
}

VPolytope octagon() {
  const std::vector<Point> pts{make_point({2, 1}),   make_point({1, 2}),   make_point({-1, 2}), make_point({-2, 1}),
                               make_point({-2, -1}), make_point({-1, -2}), make_point({1, -2}), make_point({2, -1})};
  return convex_hull(pts);
}

Rational schneider(const VPolytope& K, int m, const Context& c) { return schneider_functional(K, m, c.config.budget_dim); }

std::vector<CheckDef> kernel_checks() {
  std::vector<CheckDef> out;
  out.push_back({"kernel", "kernel.cube_volume", "kernel/volume_exact", "exact", false, [](const Context&) {
                   const Rational v = volume_exact(unit_cube(3));
                   return exact(v == 1, v, "unit cube volume differs from 1");
                 }});
  out.push_back({"kernel", "kernel.hexagon_volume", "kernel/volume_exact", "exact", false, [](const Context&) {
                   const VPolytope H = hexagon();
                   const Rational v = volume_exact(H);
                   return exact(v == 3 && H.size() == 6, v, "hexagon should have 6 vertices and area 3");
                 }});
  out.push_back({"kernel", "kernel.enum_roundtrip", "kernel/facet_enum", "exact", false, [](const Context& c) {
                   Rng rng = stream_rng(c.seed, 0);
                   long bad = 0;
                   for (int t = 0; t < 20; ++t) {
                     const VPolytope P = random_polytope(2 + t % 3, 8, rng);
                     if (!(vertex_enum(facet_enum(P)) == P) || !(convex_hull(P.vertices()) == P)) ++bad;
                   }
                   return number(bad == 0, static_cast<double>(bad), "vertex_enum(facet_enum(P)) differs from P");
                 }});
  out.push_back({"kernel", "kernel.minkowski_difference_cube", "kernel/minkowski_sum", "exact", false,
                 [](const Context&) {
                   const VPolytope D = minkowski_sum(unit_cube(3), scale(unit_cube(3), -1));
                   const Rational v = volume_exact(D);
                   return exact(D == centered_cube(3), v, "Q - Q should be [-1,1]^3");
                 }});
  out.push_back({"kernel", "kernel.mc_volume", "kernel/sample_uniform", "3 sigma", true, [](const Context& c) {
                   Rng rng = stream_rng(c.seed, 0);
                   const VPolytope P = random_polytope(3, 10, rng);
                   const FloatHRep H(facet_enum(P));
                   std::vector<double> lo(3, 1e300), hi(3, -1e300);
                   for (const auto& v : P.vertices())
                     for (int k = 0; k < 3; ++k) {
                       lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(k)].get_d());
                       hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(k)].get_d());
                     }
                   double box = 1;
                   for (int k = 0; k < 3; ++k) box *= hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
                   Moments mom = monte_carlo(c.config.samples, c.seed, 1, [&](Rng& r, double* o) {
                     double x[3];
                     for (int k = 0; k < 3; ++k)
                       x[k] = std::uniform_real_distribution<double>(lo[static_cast<std::size_t>(k)], hi[static_cast<std::size_t>(k)])(r);
                     o[0] = H.contains(x) ? box : 0.0;
                   });
                   const Estimate e = mom.estimate(0, c.seed);
                   return estimate(e.agrees_with(volume_exact(P).get_d()), e, "hit-or-miss volume disagrees with the exact volume");
                 }});
  return out;
}

std::vector<CheckDef> mdiff_checks() {
  std::vector<CheckDef> out;
  out.push_back({"mdiff", "mdiff.interval_volume", "mdiff/build_mdiff", "exact", false, [](const Context&) {
                   const Rational v = volume_exact(build_mdiff(BodyCollection::uniform(Body::polytope(segment()), 2)));
                   return exact(v == 3, v, "vol(D^2 [0,1]) should be 3");
                 }});
  out.push_back({"mdiff", "mdiff.triangle_s22", "mdiff/schneider_functional", "exact", false, [](const Context& c) {
                   const Rational v = schneider(triangle(), 2, c);
                   return exact(v == 15, v, "S_{2,2}(triangle) should be 15");
                 }});
  out.push_back({"mdiff", "mdiff.cube_s32", "mdiff/schneider_functional", "exact", false, [](const Context& c) {
                   const Rational v = schneider(unit_cube(3), 2, c);
                   return exact(v == 27, v, "S_{3,2}(cube) should be 27");
                 }});
  out.push_back({"mdiff", "mdiff.c3_s32", "mdiff/schneider_functional", "exact", false, [](const Context& c) {
                   const Rational v = schneider(c3_body(), 2, c);
                   return exact(v == Rational(111, 4), v, "S_{3,2}(C_3) should be 111/4");
                 }});
  out.push_back({"mdiff", "mdiff.segment_s1m", "mdiff/schneider_functional", "exact", false, [](const Context& c) {
                   bool ok = true;
                   Rational last;
                   for (int m = 1; m <= 4; ++m) {
                     last = schneider(segment(), m, c);
                     ok = ok && last == m + 1;
                   }
                   return exact(ok, last, "S_{1,m}(segment) should be m+1");
                 }});
  out.push_back({"mdiff", "mdiff.monotonicity", "mdiff/monotonicity_check", "exact", false, [](const Context& c) {
                   long tested = 0, bad = 0;
                   for (const VPolytope& K : {segment(), triangle(), unit_cube(2), unit_cube(3)})
                     for (int m = 1; K.dim() * (m + 1) <= c.config.budget_dim; ++m) {
                       ++tested;
                       if (!monotonicity_check(Body::polytope(K), m, MonotonicityMode::Exact, 0, 0, c.config.budget_dim).holds)
                         ++bad;
                     }
                   if (tested == 0) throw Error(ErrorKind::BudgetExceeded, "no (n, m) fits the budget");
                   return number(bad == 0, static_cast<double>(tested), "S_{n,m+1}^m > S_{n,m}^{m+1} somewhere");
                 }});
  out.push_back({"mdiff", "mdiff.translation_invariance", "mdiff/build_mdiff", "exact", false, [](const Context& c) {
                   Rng rng = stream_rng(c.seed, 0);
                   std::uniform_int_distribution<long> coord(-9, 9);
                   const VPolytope T = triangle();
                   const VPolytope base = build_mdiff(BodyCollection::uniform(Body::polytope(T), 2));
                   long bad = 0;
                   for (int t = 0; t < 20; ++t) {
                     const Point shift{Rational(coord(rng), 7), Rational(coord(rng), 5)};
                     if (!(build_mdiff(BodyCollection::uniform(Body::polytope(translate(T, shift)), 2)) == base)) ++bad;
                   }
                   return number(bad == 0, static_cast<double>(bad), "D^2 changed under translation");
                 }});
  return out;
}

std::vector<CheckDef> polar_checks() {
  std::vector<CheckDef> out;
  out.push_back({"polar", "polar.cube_ratio", "polar/polar_schneider_ratio", "< 1 by 3 sigma", true, [](const Context& c) {
                   const Estimate e = polar_schneider_ratio(Body::polytope(unit_cube(3)), 2, c.config.samples, c.seed);
                   return estimate(e.value < 1 - 3 * e.std_error, e, "cube ratio not below 1 by 3 sigma");
                 }});
  out.push_back({"polar", "polar.ball_ratio", "polar/polar_schneider_ratio", "1e-12", true, [](const Context& c) {
                   const Estimate e = polar_schneider_ratio(Body::ball(3), 2, c.config.samples, c.seed);
                   return estimate(std::abs(e.value - 1) <= 1e-12, e, "ball ratio differs from 1");
                 }});
  out.push_back({"polar", "polar.affine_invariance", "polar/polar_schneider_ratio", "3 sigma", true, [](const Context& c) {
                   const Matrix A{{Rational(2), Rational(1), Rational(0)},
                                  {Rational(0), Rational(1), Rational(1, 2)},
                                  {Rational(1), Rational(0), Rational(3)}};
                   const Estimate a = polar_schneider_ratio(Body::polytope(unit_cube(3)), 2, c.config.samples, c.seed);
                   const Estimate b =
                       polar_schneider_ratio(Body::polytope(linear_image(A, unit_cube(3))), 2, c.config.samples, c.seed + 1);
                   const double diff = std::abs(a.value - b.value), err = std::hypot(a.std_error, b.std_error);
                   return Outcome{diff <= 3 * err, b.value, b.std_error, diff <= 3 * err ? "" : "ratio changed under a linear map"};
                 }});
  out.push_back({"polar", "polar.bourgain_milman", "polar/bourgain_milman_check", "3 sigma", true, [](const Context& c) {
                   const auto v = bourgain_milman_check(Body::polytope(unit_cube(3)), 2, c.config.samples, c.seed, c.config.budget_dim);
                   return Outcome{v.holds, v.s_body.value, v.s_body.std_error, v.holds ? "" : "S_{3,2}(cube) below the bound"};
                 }});
  out.push_back({"polar", "polar.ball_s32", "mdiff/schneider_functional_mc", "3 sigma", true, [](const Context& c) {
                   const Estimate e = schneider_functional_mc(Body::ball(3), 2, c.config.samples, c.seed);
                   const double target = 21 + 9 * std::numbers::pi * std::numbers::pi / 16;
                   return estimate(e.agrees_with(target), e, "S_{3,2}(B) disagrees with 21 + 9 pi^2/16");
                 }});
  out.push_back({"polar", "polar.gardner", "polar/gardner_check", "3 sigma", true, [](const Context& c) {
                   const auto g = gardner_check(Body::polytope(centered_cube(3)), 1, c.config.samples, c.seed);
                   return estimate(g.holds, g.quermass_side, "dual quermassintegral bound violated");
                 }});
  out.push_back({"polar", "polar.collection", "polar/collection_polar_schneider", "3 sigma", true, [](const Context& c) {
                   BodyCollection K{3, 2, {Body::polytope(centered_cube(3)), Body::polytope(c3_body()), Body::ball(3)}};
                   const auto v = collection_polar_schneider(K, 0, c.config.samples, c.seed);
                   return estimate(v.holds, v.lhs, "collection inequality violated");
                 }});
  return out;
}

std::vector<CheckDef> symmetry_checks() {
  std::vector<CheckDef> out;
  out.push_back({"symmetry", "symmetry.c3_body", "symmetry/steiner_symmetral", "exact", false, [](const Context&) {
                   const VPolytope C = c3_body();
                   const Rational v = volume_exact(C);
                   return exact(C.size() == 8 && v == 8, v, "C_3 should have 8 vertices and volume 8");
                 }});
  out.push_back({"symmetry", "symmetry.steiner_counterexample", "symmetry/steiner_counterexample", "exact", false,
                 [](const Context& c) {
                   const auto r = steiner_counterexample(2, c.config.budget_dim);
                   return exact(r.increase == Rational(3, 4) && r.strict_increase, r.increase, "increase should be 3/4");
                 }});
  out.push_back({"symmetry", "symmetry.steiner_volume", "symmetry/steiner_symmetral", "exact", false, [](const Context& c) {
                   Rng rng = stream_rng(c.seed, 0);
                   std::uniform_int_distribution<long> coord(-3, 3);
                   long bad = 0;
                   for (int t = 0; t < 5; ++t) {
                     const VPolytope P = random_polytope(3, 8, rng);
                     Point v{Rational(coord(rng)), Rational(coord(rng)), Rational(1)};
                     const VPolytope S = steiner_symmetral(P, v);
                     if (volume_exact(S) != volume_exact(P) || !(steiner_symmetral(S, v) == S)) ++bad;
                   }
                   return number(bad == 0, static_cast<double>(bad), "Steiner symmetral changed volume or is not idempotent");
                 }});
  out.push_back({"symmetry", "symmetry.eli_cube", "symmetry/eli_identity_check", "exact", false, [](const Context& c) {
                   const auto e = eli_identity_check(centered_cube(3), c.config.budget_dim);
                   return exact(e.equal, e.lhs, "4 S_{3,2} differs from 84 + 3 P_3");
                 }});
  out.push_back({"symmetry", "symmetry.eli_c3", "symmetry/eli_identity_check", "exact", false, [](const Context& c) {
                   const auto e = eli_identity_check(c3_body(), c.config.budget_dim);
                   return exact(e.equal, e.lhs, "4 S_{3,2} differs from 84 + 3 P_3");
                 }});
  out.push_back({"symmetry", "symmetry.eli_m3_logged", "symmetry/eli_identity_check", "logged only", true,
                 [](const Context& c) {
                   // The m = 2 right side is m-independent; S_{3,3} is recorded against it, not checked.
                   const Estimate e = schneider_functional_mc(Body::polytope(c3_body()), 3, c.config.samples / 10, c.seed);
                   const Rational rhs = (84 + 3 * petty_product(c3_body())) / 4;
                   return Outcome{true, Json{{"s33_c3", e.value}, {"identity_prediction", to_string(rhs)}}, e.std_error, ""};
                 }});
  out.push_back({"symmetry", "symmetry.petty_cube", "symmetry/petty_product", "exact", false, [](const Context&) {
                   const Rational p = petty_product(unit_cube(3));
                   return exact(p == 8, p, "P_3(cube) should be 8");
                 }});
  out.push_back({"symmetry", "symmetry.fiber_probe", "symmetry/fiber_polar_inclusion_probe", "3 sigma", true,
                 [](const Context& c) {
                   const VPolytope K = centered_cube(2);
                   const VPolytope L = build_mdiff(BodyCollection::uniform(Body::polytope(K), 2));
                   const auto r = fiber_polar_inclusion_probe(L, make_point({2, 1}), c.config.samples / 10, c.seed, &K);
                   const bool ok = r.inclusion_failures == 0 && r.mdiff_failures == 0 && r.volume_holds && r.polar_volume_holds;
                   return estimate(ok, r.polar_sym_volume, "fiber symmetral property violated");
                 }});
  out.push_back({"symmetry", "symmetry.shadow_square", "symmetry/shadow_convexity_probe", "exact", false,
                 [](const Context& c) {
                   ShadowSystemSpec s;
                   s.base = unit_cube(2);
                   s.direction = make_point({1, 0});
                   for (const auto& v : s.base.vertices()) s.speeds.push_back(v == make_point({1, 1}) ? Rational(1) : Rational(0));
                   s.t_min = 0;
                   s.t_max = 2;
                   const auto r = shadow_convexity_probe(s, 7, 0, 0, c.seed);
                   return exact(r.volume_convex, r.volumes.back(), "vol(K(t)) is not convex on the grid");
                 }});
  out.push_back({"symmetry", "symmetry.shadow_polar", "symmetry/shadow_convexity_probe", "3 sigma", true,
                 [](const Context& c) {
                   ShadowSystemSpec s;
                   s.base = octagon();
                   s.direction = make_point({1, 1});
                   for (const auto& v : s.base.vertices()) s.speeds.push_back(v[0] + v[1] > 0 ? Rational(1, 2) : Rational(-1, 2));
                   s.t_min = Rational(-1, 2);
                   s.t_max = Rational(1, 2);
                   const auto r = shadow_convexity_probe(s, 5, 2, c.config.samples, c.seed);
                   const double worst = *std::min_element(r.second_differences.begin(), r.second_differences.end());
                   return number(r.volume_convex && r.polar_checked && r.polar_convex, worst, "midpoint convexity violated");
                 }});
  return out;
}

std::vector<CheckDef> gaussian_checks() {
  std::vector<CheckDef> out;
  out.push_back({"gaussian", "gaussian.constant", "gaussian-functional/schneider_constant", "1e-12 relative", false,
                 [](const Context&) {
                   bool ok = std::abs(schneider_constant(1, 1) - std::numbers::pi) <= 1e-12;
                   for (int n = 1; n <= 3; ++n)
                     for (int m = 1; m <= 3; ++m) {
                       const double a = schneider_constant(n, m), b = schneider_constant_via_optimum(n, m);
                       ok = ok && std::abs(a - b) <= 1e-12 * a;
                     }
                   return number(ok, schneider_constant(1, 1), "constant paths disagree");
                 }});
  out.push_back({"gaussian", "gaussian.det_identity", "gaussian-functional/det_identity_check", "1e-9 relative", false,
                 [](const Context& c) {
                   double worst = 0;
                   for (int n = 1; n <= 3; ++n)
                     for (int m = 1; m <= 3; ++m)
                       for (int t = 0; t < 100; ++t) {
                         Rng rng = stream_rng(c.seed, static_cast<std::uint64_t>(100 * (3 * n + m) + t));
                         std::vector<PDMatrix> A;
                         for (int i = 0; i <= m; ++i) A.push_back(PDMatrix::random(n, rng));
                         worst = std::max(worst, det_identity_check(A).relative_error);
                       }
                   return number(worst <= 1e-9, worst, "determinant identity off by more than 1e-9");
                 }});
  out.push_back({"gaussian", "gaussian.f_bound", "gaussian-functional/f_bound_probe", "1e-9", false, [](const Context& c) {
                   double worst = 0;
                   bool ok = true;
                   for (int n = 1; n <= 3; ++n)
                     for (int m = 1; m <= 3; ++m) {
                       const auto r = f_bound_probe(n, m, 1000, c.seed + static_cast<std::uint64_t>(3 * n + m));
                       ok = ok && r.holds;
                       worst = std::max(worst, r.max_ratio);
                     }
                   return number(ok, worst, "F_n exceeded its bound or missed equality");
                 }});
  out.push_back({"gaussian", "gaussian.functional_standard", "gaussian-functional/functional_lhs_mc", "3 sigma", true,
                 [](const Context& c) {
                   const std::vector<FunctionInput> f(3, GaussianSpec{1.0, PDMatrix::identity(2)});
                   const auto r = functional_lhs_mc(f, c.config.samples, c.seed);
                   return estimate(r.lhs.agrees_with(r.constant), r.lhs, "standard Gaussians miss C(2,2)");
                 }});
  out.push_back({"gaussian", "gaussian.functional_plateau", "gaussian-functional/functional_lhs_mc", "< pi by 3 sigma", true,
                 [](const Context& c) {
                   const auto g = GridFunction::sample(1, 201, 2.0, [](const double* x) { return std::abs(x[0]) <= 1 ? 1.0 : 0.0; });
                   const auto r = functional_lhs_mc({g, g}, c.config.samples, c.seed);
                   return estimate(r.lhs.value < std::numbers::pi - 3 * r.lhs.std_error, r.lhs, "plateau does not stay below pi");
                 }});
  out.push_back({"gaussian", "gaussian.m1_forms", "gaussian-functional/functional_lhs_mc", "3 sigma", true,
                 [](const Context& c) {
                   Rng rng = stream_rng(c.seed, 0);
                   const GaussianSpec f0{0.7, PDMatrix::random(2, rng)}, f1{1.3, PDMatrix::random(2, rng)};
                   const auto r = m1_forms_check(f0, f1, c.config.samples, c.seed);
                   return estimate(r.holds, r.product, "an m = 1 form exceeds pi^n");
                 }});
  out.push_back({"gaussian", "gaussian.ellipsoid_bound", "gaussian-functional/functional_lhs_mc", "1e-9 relative", false,
                 [](const Context& c) {
                   Rng rng = stream_rng(c.seed, 0);
                   std::vector<PDMatrix> B;
                   for (int i = 0; i < 3; ++i) B.push_back(PDMatrix::random(2, rng));
                   const auto eq = ellipsoid_dual_l2_check(std::vector<PDMatrix>(3, B[0]));
                   const auto strict = ellipsoid_dual_l2_check(B);
                   const bool ok = std::abs(eq.lhs / eq.rhs - 1) <= 1e-9 && strict.holds && strict.lhs < strict.rhs;
                   return number(ok, strict.lhs / strict.rhs, "ellipsoid bound or its equality case failed");
                 }});
  out.push_back({"gaussian", "gaussian.normalizer", "gaussian-functional/sample_schneider_gaussian", "1e-12 relative", false,
                 [](const Context&) {
                   double worst = 0;
                   for (int n = 1; n <= 3; ++n)
                     for (int m = 1; m <= 3; ++m) {
                       const double closed = std::pow((m + 1.0) / std::pow(2 * std::numbers::pi, m), n / 2.0);
                       worst = std::max(worst, std::abs(schneider_gaussian_normalizer(n, m) / closed - 1));
                     }
                   return number(worst <= 1e-12, worst, "normalizing constant mismatch");
                 }});
  out.push_back({"gaussian", "gaussian.gradient_check", "gaussian-functional/poincare_probe", "1e-5 relative", false,
                 [](const Context& c) {
                   double worst = 0;
                   for (const auto& psi : {test_constant(2), test_squared_norm(), test_cosine({1.0, 0.5})})
                     worst = std::max(worst, gradient_check(psi, 2, 2, 100, c.seed));
                   return number(worst <= 1e-5, worst, "analytic gradient disagrees with finite differences");
                 }});
  out.push_back({"gaussian", "gaussian.poincare", "gaussian-functional/poincare_probe", "3 sigma", true, [](const Context& c) {
                   bool ok = true;
                   double worst = std::numeric_limits<double>::infinity();
                   for (const auto& psi : {test_constant(2), test_squared_norm(), test_cosine({1.0, 0.5})}) {
                     const auto r = poincare_probe(psi, 2, 2, c.config.samples, c.seed);
                     ok = ok && r.holds;
                     worst = std::min(worst, r.slack);
                   }
                   return number(ok, worst, "Poincare-type inequality violated");
                 }});
  return out;
}

std::vector<CheckDef> all_checks() {
  std::vector<CheckDef> out;
  for (auto* make : {&kernel_checks, &mdiff_checks, &polar_checks, &symmetry_checks, &gaussian_checks})
    for (auto& c : (*make)()) out.push_back(std::move(c));
  return out;
}

CheckResult run_check(const CheckDef& def, const SuiteConfig& config) {
  CheckResult r;
  r.name = def.name;
  r.paper_ref = def.ref;
  r.tolerance = def.tolerance;
  if (def.monte_carlo && config.samples < config.min_samples) {
    r.status = CheckStatus::Skipped;
    r.reason = "samples below the minimum of " + std::to_string(config.min_samples);
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = def.run(Context{config, name_seed(config.seed, def.name)});
    r.status = o.pass ? CheckStatus::Pass : CheckStatus::Fail;
    r.value = o.value;
    r.error = o.error;
    r.reason = o.reason;
  } catch (const Error& e) {
    r.status = e.kind() == ErrorKind::BudgetExceeded ? CheckStatus::Skipped : CheckStatus::Fail;
    r.reason = e.what();
  } catch (const std::exception& e) {
    r.status = CheckStatus::Fail;
    r.reason = e.what();
  }
  if (config.timing)
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Json describe_polytope(const VPolytope& P, int budget_dim) {
  Json j;
  j["dim"] = P.dim();
  j["vertices"] = P.size();
  const HPolytope H = facet_enum(P);
  j["facets"] = H.size();
  if (P.dim() <= budget_dim) {
    j["volume"] = to_string(volume_exact(P));
  } else {
    j["volume"] = nullptr;
  }
  j["centroid"] = to_json(centroid(P));
  j["origin_interior"] = origin_interior(P);
  j["origin_symmetric"] = is_origin_symmetric(P);
  return j;
}

}  // namespace

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "fail";
}

void SuiteConfig::validate() const {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw Error(ErrorKind::ConfigInvalid, "unknown suite \"" + suite + "\"");
  if (samples < 0 || min_samples < 0) throw Error(ErrorKind::ConfigInvalid, "sample counts must be non-negative");
  if (budget_dim < 1) throw Error(ErrorKind::ConfigInvalid, "budget dimension must be positive");
}

bool Report::ok() const { return count(CheckStatus::Fail) == 0; }

long Report::count(CheckStatus s) const {
  return std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; });
}

Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j{{"name", c.name},       {"paper_ref", c.paper_ref}, {"status", std::string(status_name(c.status))},
           {"value", c.value},     {"error", c.error},         {"tolerance", c.tolerance},
           {"seconds", c.seconds}};
    if (!c.reason.empty()) j["reason"] = c.reason;
    checks.push_back(std::move(j));
  }
  return {{"suite", r.suite}, {"seed", r.seed}, {"checks", checks}};
}

std::vector<std::string> suite_names() { return {"all", "gaussian", "kernel", "mdiff", "polar", "symmetry"}; }

Report run_suite(const SuiteConfig& config) {
  config.validate();
  std::vector<CheckDef> defs;
  for (auto& d : all_checks())
    if (config.suite == "all" || d.suite == config.suite) defs.push_back(std::move(d));
  std::sort(defs.begin(), defs.end(), [](const CheckDef& a, const CheckDef& b) { return a.name < b.name; });

  Report report{config.suite, config.seed, std::vector<CheckResult>(defs.size())};
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < defs.size();) report.checks[i] = run_check(defs[i], config);
  };
  const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(defs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return report;
}

Json describe(const Json& input, int budget_dim) {
  if (input.is_object() && input.contains("bodies")) {
    const BodyCollection K = collection_from_json(input);
    Json j{{"kind", "collection"}, {"n", K.n}, {"m", K.m}};
    Json bodies = Json::array();
    for (const auto& b : K.bodies) {
      if (b.is_ball()) bodies.push_back({{"ball", {{"dim", b.dim()}, {"radius", to_string(b.as_ball().radius)}}}});
      else bodies.push_back(describe_polytope(b.poly(), budget_dim));
    }
    j["bodies"] = bodies;
    if (K.all_polytopes() && K.n * K.m <= budget_dim) {
      const VPolytope D = build_mdiff(K);
      j["mdiff"] = {{"dim", D.dim()}, {"vertices", D.size()}, {"volume", to_string(volume_exact(D))}};
    }
    return j;
  }
  if (input.is_object() && input.contains("halfspaces")) {
    Json j = describe_polytope(vertex_enum(hpolytope_from_json(input)), budget_dim);
    j["kind"] = "hpolytope";
    return j;
  }
  Json j = describe_polytope(vpolytope_from_json(input), budget_dim);
  j["kind"] = "polytope";
  return j;
}

}  // namespace diffbody
