"""Exact and Monte Carlo tools for higher-order difference bodies.

Polytopes are given as vertex lists; coordinates may be ints, Fractions or
"p/q" strings. Exact results come back as Fractions.
"""

import json
from fractions import Fraction

try:
    from . import _diffbody
except ImportError:  # build tree: the extension sits next to the package
    import _diffbody

DiffbodyError = _diffbody.DiffbodyError
f_bound = _diffbody.f_bound
schneider_constant = _diffbody.schneider_constant

__all__ = [
    "DiffbodyError",
    "describe",
    "volume",
    "polar_volume",
    "mdiff",
    "schneider_functional",
    "schneider_functional_mc",
    "polar_schneider_ratio",
    "steiner_symmetral",
    "eli_identity",
    "petty_product",
    "schneider_constant",
    "det_identity",
    "f_objective",
    "f_bound",
    "functional_lhs",
    "poincare",
    "run_suite",
]


def _q(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, str):
        return x
    return int(x)


def _poly(vertices):
    vertices = [[_q(c) for c in v] for v in vertices]
    return json.dumps({"dim": len(vertices[0]), "vertices": vertices})


def _body(body):
    """A vertex list, or {"ball": {"dim": n, "radius": r}}."""
    if isinstance(body, dict):
        return json.dumps(body)
    return json.dumps({"polytope": json.loads(_poly(body))})


def _vertices(j):
    return [[Fraction(c) for c in v] for v in j["vertices"]]


def _estimate(text):
    e = json.loads(text)
    return e["value"], e["std_error"]


def describe(obj, budget_dim=6):
    return json.loads(_diffbody.describe(json.dumps(obj), budget_dim))


def volume(vertices):
    return Fraction(_diffbody.volume(_poly(vertices)))


def polar_volume(vertices):
    return Fraction(_diffbody.polar_volume(_poly(vertices)))


def mdiff(bodies):
    """Vertices of D^m for a list of m+1 vertex lists (K_0, ..., K_m)."""
    n = len(bodies[0][0])
    coll = {"n": n, "m": len(bodies) - 1, "bodies": [json.loads(_body(b)) for b in bodies]}
    return _vertices(json.loads(_diffbody.mdiff(json.dumps(coll))))


def schneider_functional(vertices, m, budget_dim=6):
    return Fraction(_diffbody.schneider_functional(_poly(vertices), m, budget_dim))


def schneider_functional_mc(body, m, samples=100000, seed=1):
    """(value, standard error)."""
    return _estimate(_diffbody.schneider_functional_mc(_body(body), m, samples, seed))


def polar_schneider_ratio(body, m, samples=100000, seed=1):
    """(value, standard error)."""
    return _estimate(_diffbody.polar_schneider_ratio(_body(body), m, samples, seed))


def steiner_symmetral(vertices, direction):
    out = _diffbody.steiner_symmetral(_poly(vertices), json.dumps([_q(c) for c in direction]))
    return _vertices(json.loads(out))


def eli_identity(vertices):
    r = json.loads(_diffbody.eli_identity(_poly(vertices)))
    return {k: (v if k == "equal" else Fraction(v)) for k, v in r.items()}


def petty_product(vertices):
    return Fraction(_diffbody.petty_product(_poly(vertices)))


def _matrices(mats):
    return [[[float(x) for x in row] for row in a] for a in mats]


def det_identity(mats):
    """(det M, product form, relative error) for PD matrices A_0, ..., A_m."""
    return _diffbody.det_identity(_matrices(mats))


def f_objective(mats):
    return _diffbody.f_objective(_matrices(mats))


def functional_lhs(functions, samples=100000, seed=1):
    """functions: dicts {"amplitude", "matrix"} or grid dicts."""
    r = json.loads(_diffbody.functional_lhs(json.dumps(functions), samples, seed))
    r["lhs"] = (r["lhs"]["value"], r["lhs"]["std_error"])
    r["integral"] = (r["integral"]["value"], r["integral"]["std_error"])
    return r


def poincare(test_function, n, m, samples=100000, seed=1):
    return json.loads(_diffbody.poincare(json.dumps(test_function), n, m, samples, seed))


def run_suite(suite="all", seed=1, samples=100000, min_samples=10000, budget_dim=6, timing=True):
    return json.loads(_diffbody.run_suite(suite, seed, samples, min_samples, budget_dim, timing))
