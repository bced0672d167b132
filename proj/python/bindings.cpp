// Thin JSON-in, JSON-out layer; python/diffbody/__init__.py wraps it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diffbody/error.hpp"
#include "diffbody/report.hpp"

namespace py = pybind11;
using namespace diffbody;

namespace {

VPolytope poly(const std::string& text) { return vpolytope_from_json(parse_json(text)); }

std::string dump(const Json& j) { return j.dump(); }

Json estimate_json(const Estimate& e) { return to_json(e); }

std::vector<FunctionInput> functions(const Json& list) {
  std::vector<FunctionInput> f;
  for (const auto& x : list) {
    if (x.contains("values")) f.emplace_back(grid_function_from_json(x));
    else f.emplace_back(gaussian_from_json(x));
  }
  return f;
}

}  // namespace

PYBIND11_MODULE(_diffbody, m) {
  py::register_exception<Error>(m, "DiffbodyError");

  m.def("describe", [](const std::string& j, int budget) { return dump(describe(parse_json(j), budget)); },
        py::arg("body"), py::arg("budget_dim") = kDefaultBudgetDim);
  m.def("volume", [](const std::string& P) { return to_string(volume_exact(poly(P))); });
  m.def("polar_volume", [](const std::string& P) { return to_string(polar_volume_exact(poly(P))); });
  m.def("mdiff", [](const std::string& K) { return dump(to_json(build_mdiff(collection_from_json(parse_json(K))))); });
  m.def("schneider_functional",
        [](const std::string& P, int order, int budget) { return to_string(schneider_functional(poly(P), order, budget)); },
        py::arg("polytope"), py::arg("m"), py::arg("budget_dim") = kDefaultBudgetDim);
  m.def("schneider_functional_mc",
        [](const std::string& K, int order, long samples, std::uint64_t seed) {
          return dump(estimate_json(schneider_functional_mc(body_from_json(parse_json(K)), order, samples, seed)));
        });
  m.def("polar_schneider_ratio", [](const std::string& K, int order, long samples, std::uint64_t seed) {
    return dump(estimate_json(polar_schneider_ratio(body_from_json(parse_json(K)), order, samples, seed)));
  });
  m.def("steiner_symmetral", [](const std::string& P, const std::string& v) {
    return dump(to_json(steiner_symmetral(poly(P), point_from_json(parse_json(v)))));
  });
  m.def("eli_identity", [](const std::string& P) {
    const auto e = eli_identity_check(poly(P));
    return dump({{"lhs", to_string(e.lhs)}, {"rhs", to_string(e.rhs)}, {"schneider", to_string(e.schneider)},
                 {"petty", to_string(e.petty)}, {"equal", e.equal}});
  });
  m.def("petty_product", [](const std::string& P) { return to_string(petty_product(poly(P))); });

  m.def("schneider_constant", &schneider_constant);
  m.def("det_identity", [](const std::vector<std::vector<std::vector<double>>>& mats) {
    std::vector<PDMatrix> A;
    for (const auto& a : mats) A.emplace_back(DenseMatrix::from_rows(a));
    const auto r = det_identity_check(A);
    return std::make_tuple(r.direct, r.identity, r.relative_error);
  });
  m.def("f_objective", [](const std::vector<std::vector<std::vector<double>>>& mats) {
    std::vector<PDMatrix> A;
    for (const auto& a : mats) A.emplace_back(DenseMatrix::from_rows(a));
    return f_objective(A);
  });
  m.def("f_bound", &f_bound);
  m.def("functional_lhs", [](const std::string& list, long samples, std::uint64_t seed) {
    const auto r = functional_lhs_mc(functions(parse_json(list)), samples, seed);
    return dump({{"lhs", to_json(r.lhs)}, {"integral", to_json(r.integral)}, {"constant", r.constant}});
  });
  m.def("poincare", [](const std::string& psi, int n, int order, long samples, std::uint64_t seed) {
    const auto r = poincare_probe(test_function_from_json(parse_json(psi)), n, order, samples, seed);
    return dump({{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"slack_error", r.slack_error}, {"holds", r.holds}});
  });

  m.def("run_suite", [](const std::string& suite, std::uint64_t seed, long samples, long min_samples, int budget, bool timing) {
    SuiteConfig c;
    c.suite = suite;
    c.seed = seed;
    c.samples = samples;
    c.min_samples = min_samples;
    c.budget_dim = budget;
    c.timing = timing;
    py::gil_scoped_release release;
    return dump(to_json(run_suite(c)));
  });
}
