#include "doctest.h"

#include "diffbody/error.hpp"
#include "diffbody/report.hpp"

using namespace diffbody;

#ifndef DIFFBODY_DATA_DIR
#define DIFFBODY_DATA_DIR "data"
#endif

namespace {

Json data(const std::string& name) { return read_json_file(std::string(DIFFBODY_DATA_DIR) + "/" + name); }

}  // namespace

TEST_CASE("polytope JSON round-trips bit-exactly") {
  Rng rng(51);
  for (int t = 0; t < 10; ++t) {
    const VPolytope P = scale(random_polytope(3, 8, rng), Rational(7, 3));
    const std::string text = to_json(P).dump();
    CHECK(vpolytope_from_json(parse_json(text)) == P);
    CHECK(to_json(vpolytope_from_json(parse_json(text))).dump() == text);
    const HPolytope H = facet_enum(P);
    CHECK(to_json(hpolytope_from_json(parse_json(to_json(H).dump()))).dump() == to_json(H).dump());
    CHECK(vertex_enum(hpolytope_from_json(to_json(H))) == P);
  }
}

TEST_CASE("collections, estimates and Gaussian specs round-trip") {
  const BodyCollection K{2, 2, {Body::polytope(unit_cube(2)), Body::ball(2, Rational(3, 2)), Body::polytope(centered_cube(2))}};
  const Json j = to_json(K);
  CHECK(to_json(collection_from_json(parse_json(j.dump()))).dump() == j.dump());
  Json spec_ball = parse_json(R"({"n": 3, "m": 1, "bodies": [{"ball": {"radius": "2"}}, {"ball": {}}]})");
  const BodyCollection B = collection_from_json(spec_ball);
  CHECK(B.bodies[0].as_ball().radius == 2);
  CHECK(B.bodies[1].dim() == 3);

  const Estimate e{0.1 + 0.2, 1.0 / 3, 12345, 987654321012345ull};
  const Estimate back = estimate_from_json(parse_json(to_json(e).dump()));
  CHECK(back.value == e.value);
  CHECK(back.std_error == e.std_error);
  CHECK(back.samples == e.samples);
  CHECK(back.seed == e.seed);

  const GaussianSpec g{0.7, PDMatrix(DenseMatrix::from_rows({{2.0 / 3, 0.1}, {0.1, 1e-3 + 1.0 / 7}}))};
  const GaussianSpec g2 = gaussian_from_json(parse_json(to_json(g).dump()));
  CHECK(g2.amplitude == g.amplitude);
  CHECK(g2.matrix == g.matrix);

  ShadowSystemSpec s;
  s.base = unit_cube(2);
  s.direction = make_point({1, 2});
  s.speeds = {Rational(1, 3), 0, Rational(-2), 1};
  s.t_min = Rational(-1, 2);
  const Json sj = to_json(s);
  CHECK(to_json(shadow_spec_from_json(parse_json(sj.dump()))).dump() == sj.dump());

  const TestFunction cosine = test_function_from_json(parse_json(R"({"family": "cosine", "u": [1, 2]})"));
  const double x[2] = {0.25, 0.5};
  CHECK(cosine.value(x, 2) == doctest::Approx(std::cos(1.25)));
}

TEST_CASE("malformed input raises ParseError") {
  for (const char* text : {"{", R"({"dim": 2})", R"({"dim": 2, "vertices": [["1.5", "0"]]})",
                           R"({"dim": 2, "vertices": [[1, 0], [0]]})"}) {
    try {
      vpolytope_from_json(parse_json(text));
      FAIL("accepted " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
  try {
    gaussian_from_json(parse_json(R"({"amplitude": 1, "matrix": [[1, 2], [2, 1]]})"));
    FAIL("indefinite matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}

TEST_CASE("describe the shipped bodies") {
  const Json cube = describe(data("cube.json"));
  CHECK(cube["dim"] == 3);
  CHECK(cube["vertices"] == 8);
  CHECK(cube["facets"] == 6);
  CHECK(cube["volume"] == "1");
  CHECK(cube["origin_interior"] == false);
  const Json c3 = describe(data("c3.json"));
  CHECK(c3["vertices"] == 8);
  CHECK(c3["volume"] == "8");
  CHECK(c3["origin_interior"] == true);
  const Json hex = describe(data("hexagon.json"));
  CHECK(hex["vertices"] == 6);
  CHECK(hex["volume"] == "3");
  const Json coll = describe(data("cube_collection.json"));
  CHECK(coll["kind"] == "collection");
  CHECK(coll["mdiff"]["volume"] == "27");
  CHECK(describe(data("cube.json"), 2)["volume"].is_null());
}

TEST_CASE("reports are deterministic and sorted") {
  SuiteConfig cfg;
  cfg.suite = "gaussian";
  cfg.samples = 20000;
  cfg.min_samples = 1000;
  cfg.timing = false;
  const Report a = run_suite(cfg), b = run_suite(cfg);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(a.ok());
  CHECK(std::is_sorted(a.checks.begin(), a.checks.end(),
                       [](const CheckResult& x, const CheckResult& y) { return x.name < y.name; }));
  for (const auto& c : a.checks) CHECK(c.paper_ref.find('/') != std::string::npos);
  const Json j = to_json(a);
  CHECK(j["suite"] == "gaussian");
  for (const char* key : {"name", "paper_ref", "status", "value", "error", "tolerance", "seconds"})
    CHECK(j["checks"][0].contains(key));
}

TEST_CASE("tiny budgets skip rather than fail") {
  SuiteConfig cfg;
  cfg.suite = "mdiff";
  cfg.samples = 10;
  cfg.budget_dim = 4;
  const Report r = run_suite(cfg);
  CHECK(r.ok());
  bool skipped_c3 = false;
  for (const auto& c : r.checks) {
    if (c.name == "mdiff.c3_s32") skipped_c3 = c.status == CheckStatus::Skipped;
    if (c.name == "mdiff.triangle_s22") CHECK(c.status == CheckStatus::Pass);
  }
  CHECK(skipped_c3);

  cfg.suite = "polar";
  cfg.budget_dim = kDefaultBudgetDim;
  for (const auto& c : run_suite(cfg).checks) CHECK(c.status == CheckStatus::Skipped);

  cfg.suite = "nope";
  CHECK_THROWS_AS(run_suite(cfg), Error);
}
