#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "diffbody/error.hpp"
#include "diffbody/report.hpp"

using namespace diffbody;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  long samples = 100000;
  int budget_dim = kDefaultBudgetDim;
  std::string out;
};

void emit(const Globals& g, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) std::cout << text;
  else write_text_file(g.out, text);
}

Point parse_direction(const std::string& text) {
  Point v;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) v.push_back(parse_rational(part));
  if (v.empty()) throw Error(ErrorKind::ConfigInvalid, "empty direction");
  return v;
}

BodyCollection load_collection(const Json& j, int m) {
  if (j.contains("bodies")) return collection_from_json(j);
  return BodyCollection::uniform(Body::polytope(vpolytope_from_json(j)), m);
}

int run_suite_cmd(const Globals& g, SuiteConfig cfg) {
  cfg.seed = g.seed;
  cfg.samples = g.samples;
  cfg.budget_dim = g.budget_dim;
  const Report r = run_suite(cfg);
  for (const auto& c : r.checks) {
    std::cerr << std::left << std::setw(8) << status_name(c.status) << std::setw(40) << c.name << c.value.dump();
    if (c.error > 0) std::cerr << " +- " << c.error;
    if (!c.reason.empty()) std::cerr << "  (" << c.reason << ")";
    std::cerr << "\n";
  }
  std::cerr << r.count(CheckStatus::Pass) << " passed, " << r.count(CheckStatus::Fail) << " failed, "
            << r.count(CheckStatus::Skipped) << " skipped\n";
  emit(g, to_json(r));
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo tools for higher-order difference bodies"};
  app.set_config("--config", "", "Key-value config file; sections name subcommands");
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--samples", g.samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--budget-dim", g.budget_dim, "Largest nm handled by exact hulls")->capture_default_str();
  app.add_option("--out", g.out, "Write JSON output to this file");

  SuiteConfig cfg;
  bool no_timing = false;
  auto* suite = app.add_subcommand("suite", "Run a verification suite and emit a report");
  suite->fallthrough();
  suite->add_option("name", cfg.suite, "kernel | mdiff | polar | symmetry | gaussian | all")->capture_default_str();
  suite->add_option("--min-samples", cfg.min_samples, "Skip MC checks below this sample count")->capture_default_str();
  suite->add_flag("--no-timing", no_timing, "Report 0 seconds so output is byte-stable");

  std::string file;
  auto* desc = app.add_subcommand("describe", "Summarize a polytope or collection file");
  desc->fallthrough();
  desc->add_option("file", file)->required()->check(CLI::ExistingFile);

  int m = 2;
  bool write_body = false;
  auto* md = app.add_subcommand("mdiff", "Build D^m(K) and its Schneider functional");
  md->fallthrough();
  md->add_option("file", file)->required()->check(CLI::ExistingFile);
  md->add_option("-m", m, "Order m for single-body files")->capture_default_str();
  md->add_flag("--vertices", write_body, "Include the vertices of D^m(K)");

  double q = 0;
  auto* po = app.add_subcommand("polar", "Polar volume of D^m(K) and the Schneider ratio");
  po->fallthrough();
  po->add_option("file", file)->required()->check(CLI::ExistingFile);
  po->add_option("-m", m, "Order m for single-body files")->capture_default_str();
  po->add_option("-q", q, "Weight exponent of the dual measure")->capture_default_str();

  std::string direction;
  auto* sy = app.add_subcommand("symmetrize", "Steiner symmetral of a polytope");
  sy->fallthrough();
  sy->add_option("file", file)->required()->check(CLI::ExistingFile);
  sy->add_option("--direction", direction, "Comma-separated rationals, e.g. 1,1,1")->required();

  auto* ga = app.add_subcommand("gaussian", "Gaussian functional checks for a tuple of Gaussian specs");
  ga->fallthrough();
  ga->add_option("file", file, "JSON with \"functions\": [GaussianSpec, ...] and optional \"test_function\"")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*suite) {
      cfg.timing = !no_timing;
      return run_suite_cmd(g, cfg);
    }
    const Json input = read_json_file(file);
    if (*desc) {
      emit(g, describe(input, g.budget_dim));
    } else if (*md) {
      const BodyCollection K = load_collection(input, m);
      if (K.n * K.m > g.budget_dim) throw Error(ErrorKind::BudgetExceeded, "nm exceeds --budget-dim");
      const Hull h = compute_hull(build_mdiff(K).vertices());
      Json j{{"n", K.n}, {"m", K.m}, {"vertices", h.polytope.size()}, {"facets", h.facets.size()},
             {"volume", to_string(h.volume)}};
      Rational denom = 1;
      for (int i = 1; i <= K.m; ++i) denom *= K.bodies[static_cast<std::size_t>(i)].volume_exact();
      j["schneider"] = to_string(h.volume / denom);
      if (write_body) j["mdiff"] = to_json(h.polytope);
      emit(g, j);
    } else if (*po) {
      const BodyCollection K = load_collection(input, m);
      Json j{{"n", K.n}, {"m", K.m}, {"polar_volume", to_json(polar_volume_mc(K, q, g.samples, g.seed))}};
      if (q == 0 && K.all_polytopes() && K.n * K.m <= g.budget_dim)
      {
        const VPolytope polar = vertex_enum(polar_dual(build_mdiff(K)));
        j["polar_volume_exact"] = to_string(volume_exact(polar));
        j["polar_centroid"] = to_json(centroid(polar));
      }
      if (!input.contains("bodies")) j["ratio"] = to_json(polar_schneider_ratio(K.bodies[0], K.m, g.samples, g.seed));
      emit(g, j);
    } else if (*sy) {
      const VPolytope P = vpolytope_from_json(input);
      const VPolytope S = steiner_symmetral(P, parse_direction(direction));
      emit(g, {{"symmetral", to_json(S)}, {"volume", to_string(volume_exact(S))}});
    } else if (*ga) {
      std::vector<FunctionInput> f;
      std::vector<PDMatrix> A;
      for (const auto& spec : input.at("functions")) {
        GaussianSpec gs = gaussian_from_json(spec);
        A.push_back(gs.matrix);
        f.push_back(std::move(gs));
      }
      const int n = A.front().n(), mm = static_cast<int>(A.size()) - 1;
      const auto det = det_identity_check(A);
      const auto lhs = functional_lhs_mc(f, g.samples, g.seed);
      Json j{{"n", n},
             {"m", mm},
             {"det_direct", det.direct},
             {"det_identity", det.identity},
             {"f_objective", f_objective(A)},
             {"f_bound", f_bound(n, mm)},
             {"lhs", to_json(lhs.lhs)},
             {"constant", lhs.constant}};
      if (input.contains("test_function")) {
        const auto r = poincare_probe(test_function_from_json(input.at("test_function")), n, mm, g.samples, g.seed);
        j["poincare"] = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"slack_error", r.slack_error},
                         {"holds", r.holds}};
      }
      emit(g, j);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
