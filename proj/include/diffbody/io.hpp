#pragma once

#include <filesystem>

#include "json.hpp"

#include "diffbody/gaussian.hpp"
#include "diffbody/symmetry.hpp"

namespace diffbody {

using Json = nlohmann::json;

// Rationals travel as "p/q" strings; floats as JSON numbers, which nlohmann
// prints with round-trip precision. All readers throw ParseError.

Json to_json(const Point& p);
Point point_from_json(const Json& j);

/// {"dim": d, "vertices": [["p/q", ...], ...]}; the reader re-hulls.
Json to_json(const VPolytope& P);
VPolytope vpolytope_from_json(const Json& j);

/// {"dim": d, "halfspaces": [{"normal": [...], "offset": "p/q"}, ...]}
Json to_json(const HPolytope& H);
HPolytope hpolytope_from_json(const Json& j);

/// {"polytope": {...}} or {"ball": {"radius": "p/q"}}; a ball needs its
/// dimension from the enclosing collection or a "dim" member.
Json to_json(const Body& K);
Body body_from_json(const Json& j, int dim_hint = 0);

/// {"n": n, "m": m, "bodies": [...]}
Json to_json(const BodyCollection& K);
BodyCollection collection_from_json(const Json& j);

Json to_json(const Estimate& e);
Estimate estimate_from_json(const Json& j);

/// {"amplitude": c, "matrix": [[...]]}
Json to_json(const GaussianSpec& g);
GaussianSpec gaussian_from_json(const Json& j);

Json to_json(const GridFunction& g);
GridFunction grid_function_from_json(const Json& j);

/// {"family": "constant" | "squared_norm" | "cosine", "c": .., "u": [..]}
TestFunction test_function_from_json(const Json& j);

Json to_json(const ShadowSystemSpec& s);
ShadowSystemSpec shadow_spec_from_json(const Json& j);
Json to_json(const ShadowProbeReport& r);

Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace diffbody
