#include "diffbody/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "diffbody/error.hpp"
#include "diffbody/hull.hpp"

namespace diffbody {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing member \"") + key + "\"");
  return j.at(key);
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  fail("rationals must be strings of the form p/q");
}

Json to_json(const Rational& q) { return to_string(q); }

}  // namespace

Json to_json(const Point& p) {
  Json a = Json::array();
  for (const auto& c : p) a.push_back(to_json(c));
  return a;
}

Point point_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_array()) fail("a point must be an array");
    Point p;
    for (const auto& c : j) p.push_back(rational_from_json(c));
    return p;
  });
}

Json to_json(const VPolytope& P) {
  Json v = Json::array();
  for (const auto& x : P.vertices()) v.push_back(to_json(x));
  return {{"dim", P.dim()}, {"vertices", v}};
}

VPolytope vpolytope_from_json(const Json& j) {
  return guarded([&] {
    const int dim = member(j, "dim").get<int>();
    std::vector<Point> pts;
    for (const auto& x : member(j, "vertices")) {
      pts.push_back(point_from_json(x));
      if (static_cast<int>(pts.back().size()) != dim) fail("vertex of the wrong dimension");
    }
    return convex_hull(pts);
  });
}

Json to_json(const HPolytope& H) {
  Json hs = Json::array();
  for (const auto& h : H.halfspaces()) hs.push_back({{"normal", to_json(h.normal)}, {"offset", to_json(h.offset)}});
  return {{"dim", H.dim()}, {"halfspaces", hs}};
}

HPolytope hpolytope_from_json(const Json& j) {
  return guarded([&] {
    const int dim = member(j, "dim").get<int>();
    std::vector<Halfspace> hs;
    for (const auto& h : member(j, "halfspaces")) {
      hs.push_back({point_from_json(member(h, "normal")), rational_from_json(member(h, "offset"))});
      if (static_cast<int>(hs.back().normal.size()) != dim) fail("normal of the wrong dimension");
    }
    return HPolytope(dim, std::move(hs));
  });
}

Json to_json(const Body& K) {
  if (K.is_ball()) return {{"ball", {{"dim", K.dim()}, {"radius", to_json(K.as_ball().radius)}}}};
  return {{"polytope", to_json(K.poly())}};
}

Body body_from_json(const Json& j, int dim_hint) {
  return guarded([&] {
    if (j.is_object() && j.contains("ball")) {
      const Json& b = j.at("ball");
      const int dim = b.contains("dim") ? b.at("dim").get<int>() : dim_hint;
      if (dim <= 0) fail("ball without a dimension");
      const Rational r = b.contains("radius") ? rational_from_json(b.at("radius")) : Rational(1);
      if (sgn(r) <= 0) fail("ball radius must be positive");
      return Body::ball(dim, r);
    }
    return Body::polytope(vpolytope_from_json(member(j, "polytope")));
  });
}

Json to_json(const BodyCollection& K) {
  Json bodies = Json::array();
  for (const auto& b : K.bodies) bodies.push_back(to_json(b));
  return {{"n", K.n}, {"m", K.m}, {"bodies", bodies}};
}

BodyCollection collection_from_json(const Json& j) {
  return guarded([&] {
    BodyCollection K;
    K.n = member(j, "n").get<int>();
    K.m = member(j, "m").get<int>();
    for (const auto& b : member(j, "bodies")) K.bodies.push_back(body_from_json(b, K.n));
    try {
      K.validate();
    } catch (const Error& e) {
      fail(e.what());
    }
    return K;
  });
}

Json to_json(const Estimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

Estimate estimate_from_json(const Json& j) {
  return guarded([&] {
    Estimate e;
    e.value = member(j, "value").get<double>();
    e.std_error = member(j, "std_error").get<double>();
    e.samples = member(j, "samples").get<long>();
    e.seed = member(j, "seed").get<std::uint64_t>();
    return e;
  });
}

Json to_json(const GaussianSpec& g) { return {{"amplitude", g.amplitude}, {"matrix", g.matrix.matrix().to_rows()}}; }

GaussianSpec gaussian_from_json(const Json& j) {
  return guarded([&] {
    const auto rows = member(j, "matrix").get<std::vector<std::vector<double>>>();
    const double c = j.contains("amplitude") ? j.at("amplitude").get<double>() : 1.0;
    try {
      return GaussianSpec{c, PDMatrix(DenseMatrix::from_rows(rows))};
    } catch (const Error& e) {
      fail(e.what());
    }
  });
}

Json to_json(const GridFunction& g) {
  return {{"n", g.n}, {"points", g.points}, {"half_width", g.half_width}, {"values", g.values}};
}

GridFunction grid_function_from_json(const Json& j) {
  return guarded([&] {
    GridFunction g;
    g.n = member(j, "n").get<int>();
    g.points = member(j, "points").get<int>();
    g.half_width = member(j, "half_width").get<double>();
    g.values = member(j, "values").get<std::vector<double>>();
    return g;
  });
}

TestFunction test_function_from_json(const Json& j) {
  return guarded([&] {
    const auto family = member(j, "family").get<std::string>();
    if (family == "constant") return test_constant(j.value("c", 1.0));
    if (family == "squared_norm") return test_squared_norm();
    if (family == "cosine") return test_cosine(member(j, "u").get<std::vector<double>>());
    fail("unknown test-function family \"" + family + "\"");
  });
}

Json to_json(const ShadowSystemSpec& s) {
  Json speeds = Json::array();
  for (const auto& a : s.speeds) speeds.push_back(to_json(a));
  return {{"base", to_json(s.base)},
          {"direction", to_json(s.direction)},
          {"speeds", speeds},
          {"t_min", to_json(s.t_min)},
          {"t_max", to_json(s.t_max)}};
}

ShadowSystemSpec shadow_spec_from_json(const Json& j) {
  return guarded([&] {
    ShadowSystemSpec s;
    // Speeds follow the listed points, which the hull may reorder.
    const Json& base = member(j, "base");
    s.base = vpolytope_from_json(base);
    s.direction = point_from_json(member(j, "direction"));
    const Json& vs = member(base, "vertices");
    const Json& sp = member(j, "speeds");
    if (!sp.is_array() || sp.size() != vs.size()) fail("need one speed per listed base point");
    if (vs.size() != s.base.size()) fail("every base point must be a vertex");
    std::vector<std::pair<Point, Rational>> listed;
    for (std::size_t i = 0; i < vs.size(); ++i) listed.emplace_back(point_from_json(vs[i]), rational_from_json(sp[i]));
    for (const auto& v : s.base.vertices()) {
      auto it = std::find_if(listed.begin(), listed.end(), [&](const auto& e) { return e.first == v; });
      s.speeds.push_back(it->second);
    }
    if (j.contains("t_min")) s.t_min = rational_from_json(j.at("t_min"));
    if (j.contains("t_max")) s.t_max = rational_from_json(j.at("t_max"));
    try {
      s.validate();
    } catch (const Error& e) {
      fail(e.what());
    }
    return s;
  });
}

Json to_json(const ShadowProbeReport& r) {
  Json grid = Json::array(), vols = Json::array(), inv = Json::array();
  for (const auto& t : r.grid) grid.push_back(to_json(t));
  for (const auto& v : r.volumes) vols.push_back(to_json(v));
  for (const auto& e : r.inverse_polar) inv.push_back(to_json(e));
  return {{"grid", grid},
          {"volumes", vols},
          {"volume_convex", r.volume_convex},
          {"polar_checked", r.polar_checked},
          {"inverse_polar", inv},
          {"second_differences", r.second_differences},
          {"second_difference_errors", r.second_difference_errors},
          {"skipped", r.skipped},
          {"polar_convex", r.polar_convex}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot write " + path.string());
  out << text;
}

}  // namespace diffbody
