#include "diffbody/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "diffbody/error.hpp"

namespace diffbody {

Rational volume_exact(const VPolytope& P) { return compute_hull(P.vertices()).volume; }

Point centroid(const VPolytope& P) { return compute_hull(P.vertices()).centroid; }

HPolytope facet_enum(const VPolytope& P) { return compute_hull(P.vertices()).facets; }

std::optional<Point> interior_point(const HPolytope& H) {
  const int d = H.dim();
  std::vector<Halfspace> cons;
  cons.reserve(H.size() + 1);
  for (const auto& h : H.halfspaces()) {
    Halfspace c{h.normal, h.offset};
    c.normal.emplace_back(1);
    cons.push_back(std::move(c));
  }
  Halfspace cap{zero_point(d + 1), 1};
  cap.normal.back() = 1;
  cons.push_back(std::move(cap));
  Point obj = zero_point(d + 1);
  obj.back() = 1;
  LpResult r = lp_solve(d + 1, cons, obj);
  if (r.status != LpStatus::Feasible || sgn(r.value) <= 0) return std::nullopt;
  r.x.pop_back();
  return r.x;
}

bool certify_bounded(const HPolytope& H) {
  for (int i = 0; i < H.dim(); ++i)
    for (int s : {1, -1}) {
      Point e = zero_point(H.dim());
      e[static_cast<std::size_t>(i)] = s;
      if (lp_solve(H.dim(), H.halfspaces(), e).status != LpStatus::Feasible) return false;
    }
  return true;
}

VPolytope vertex_enum(const HPolytope& H) {
  const int d = H.dim();
  auto x0 = interior_point(H);
  if (!x0) throw Error(ErrorKind::DegenerateInput, "halfspace system has empty interior");
  if (!H.bounded() && !certify_bounded(H)) throw Error(ErrorKind::Unbounded, "halfspace system is unbounded");

  // polar of H - x0 is the hull of a_i / (b_i - <a_i, x0>)
  std::vector<Point> dual;
  dual.reserve(H.size() + 1);
  for (const auto& h : H.halfspaces()) {
    const Rational slack = h.offset - dot(h.normal, *x0);
    bool zero = std::all_of(h.normal.begin(), h.normal.end(), [](const Rational& c) { return sgn(c) == 0; });
    if (zero) continue;
    dual.push_back(scale(h.normal, 1 / slack));
  }
  dual.push_back(zero_point(d));  // harmless interior point, keeps tiny systems full-dimensional
  Hull hull = compute_hull(dual);
  std::vector<Point> verts;
  verts.reserve(hull.facets.size());
  for (const auto& f : hull.facets.halfspaces()) {
    if (sgn(f.offset) <= 0) throw Error(ErrorKind::Unbounded, "halfspace system is unbounded");
    verts.push_back(add(*x0, scale(f.normal, 1 / f.offset)));
  }
  std::sort(verts.begin(), verts.end(), lex_less);
  return VPolytope::from_canonical(d, std::move(verts));
}

VPolytope minkowski_sum(const VPolytope& P, const VPolytope& Q) {
  if (P.dim() != Q.dim()) throw Error(ErrorKind::DimensionMismatch, "Minkowski sum of different dimensions");
  std::vector<Point> sums;
  sums.reserve(P.size() * Q.size());
  for (const auto& p : P.vertices())
    for (const auto& q : Q.vertices()) sums.push_back(add(p, q));
  return VPolytope::from_canonical(P.dim(), extreme_points(sums));
}

std::vector<Point> extreme_points(std::span<const Point> input) {
  if (input.empty()) throw Error(ErrorKind::EmptyInput, "no points");
  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return pts;

  const std::size_t d = pts.front().size();
  Matrix diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  const int k = rank(diffs);
  if (k == static_cast<int>(d)) return compute_hull(pts).polytope.vertices();

  // coordinates on which the affine hull projects bijectively
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < d && static_cast<int>(cols.size()) < k; ++j) {
    Matrix sub_m;
    for (const auto& row : diffs) {
      Point r;
      for (std::size_t c : cols) r.push_back(row[c]);
      r.push_back(row[j]);
      sub_m.push_back(std::move(r));
    }
    if (rank(std::move(sub_m)) > static_cast<int>(cols.size())) cols.push_back(j);
  }
  std::map<Point, std::size_t, bool (*)(const Point&, const Point&)> back(lex_less);
  std::vector<Point> proj;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point p;
    for (std::size_t c : cols) p.push_back(pts[i][c]);
    back.emplace(p, i);
    proj.push_back(std::move(p));
  }
  std::vector<Point> out;
  const Hull hull = compute_hull(proj);
  for (const auto& v : hull.polytope.vertices()) out.push_back(pts[back.at(v)]);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

VPolytope linear_image(const Matrix& M, const VPolytope& P, bool require_full_dim) {
  for (const auto& row : M)
    if (static_cast<int>(row.size()) != P.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix columns != polytope dim");
  const int rows = static_cast<int>(M.size());
  std::vector<Point> img;
  img.reserve(P.size());
  for (const auto& v : P.vertices()) img.push_back(apply(M, v));
  if (require_full_dim) {
    Matrix diffs;
    for (const auto& p : img) diffs.push_back(sub(p, img.front()));
    if (rank(diffs) < rows) throw Error(ErrorKind::DegenerateInput, "linear image is not full-dimensional");
  }
  return VPolytope::from_canonical(rows, extreme_points(img));
}

VPolytope translate(const VPolytope& P, const Point& t) {
  std::vector<Point> v;
  v.reserve(P.size());
  for (const auto& p : P.vertices()) v.push_back(add(p, t));
  return VPolytope::from_canonical(P.dim(), std::move(v));
}

VPolytope scale(const VPolytope& P, const Rational& s) {
  std::vector<Point> v;
  v.reserve(P.size());
  for (const auto& p : P.vertices()) v.push_back(scale(p, s));
  if (sgn(s) < 0) std::sort(v.begin(), v.end(), lex_less);
  return VPolytope::from_canonical(P.dim(), std::move(v));
}

bool is_origin_symmetric(const VPolytope& P) {
  std::vector<Point> neg;
  neg.reserve(P.size());
  for (const auto& p : P.vertices()) neg.push_back(negate(p));
  std::sort(neg.begin(), neg.end(), lex_less);
  std::vector<Point> pos = P.vertices();
  std::sort(pos.begin(), pos.end(), lex_less);
  return neg == pos;
}

VPolytope random_polytope(int dim, int points, Rng& rng, int range, bool symmetric) {
  if (dim < 1 || points < 1) throw Error(ErrorKind::EmptyInput, "need a positive dimension and point count");
  std::uniform_int_distribution<long> coord(-range, range);
  for (;;) {
    std::vector<Point> pts;
    for (int i = 0; i < points; ++i) {
      Point p;
      for (int k = 0; k < dim; ++k) p.push_back(Rational(coord(rng)));
      if (symmetric) pts.push_back(negate(p));
      pts.push_back(std::move(p));
    }
    Matrix diffs;
    for (const auto& p : pts) diffs.push_back(sub(p, pts.front()));
    if (rank(diffs) == dim) return convex_hull(pts);
  }
}

FloatHRep::FloatHRep(const HPolytope& H) : dim(H.dim()) {
  for (const auto& h : H.halfspaces()) {
    for (const auto& c : h.normal) normals.push_back(c.get_d());
    offsets.push_back(h.offset.get_d());
  }
}

bool FloatHRep::contains(const double* x, double tol) const {
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    double s = 0;
    const double* a = &normals[i * static_cast<std::size_t>(dim)];
    for (int k = 0; k < dim; ++k) s += a[k] * x[k];
    if (s > offsets[i] + tol) return false;
  }
  return true;
}

FloatVRep::FloatVRep(const VPolytope& P) : dim(P.dim()) {
  for (const auto& v : P.vertices())
    for (const auto& c : v) coords.push_back(c.get_d());
}

double FloatVRep::support(const double* u) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < coords.size(); i += static_cast<std::size_t>(dim)) {
    double s = 0;
    for (int k = 0; k < dim; ++k) s += coords[i + static_cast<std::size_t>(k)] * u[k];
    best = std::max(best, s);
  }
  return best;
}

namespace {

struct SamplerSetup {
  FloatHRep rep;
  std::vector<double> lo, hi, start;
  double acceptance;
};

std::vector<std::vector<double>> run_sampler(const SamplerSetup& s, long count, Rng& rng, const SamplerOptions& opt) {
  const int d = s.rep.dim;
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, count)));
  if (s.acceptance >= opt.min_rejection_rate) {
    std::vector<std::uniform_real_distribution<double>> coord;
    for (int k = 0; k < d; ++k) coord.emplace_back(s.lo[static_cast<std::size_t>(k)], s.hi[static_cast<std::size_t>(k)]);
    std::vector<double> x(static_cast<std::size_t>(d));
    while (static_cast<long>(out.size()) < count) {
      for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = coord[static_cast<std::size_t>(k)](rng);
      if (s.rep.contains(x.data())) out.push_back(x);
    }
    return out;
  }

  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  std::vector<double> x = s.start, u(static_cast<std::size_t>(d));
  const int steps = std::max(1, opt.burn_in_per_dim * d);
  auto step = [&] {
    double norm = 0;
    for (auto& c : u) {
      c = gauss(rng);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (auto& c : u) c /= norm;
    double tmin = -std::numeric_limits<double>::infinity(), tmax = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.rep.size(); ++i) {
      const double* a = &s.rep.normals[i * static_cast<std::size_t>(d)];
      double au = 0, ax = 0;
      for (int k = 0; k < d; ++k) {
        au += a[k] * u[static_cast<std::size_t>(k)];
        ax += a[k] * x[static_cast<std::size_t>(k)];
      }
      const double slack = s.rep.offsets[i] - ax;
      if (au > 0) tmax = std::min(tmax, slack / au);
      else if (au < 0) tmin = std::max(tmin, slack / au);
    }
    const double t = tmin + (tmax - tmin) * unif(rng);
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] += t * u[static_cast<std::size_t>(k)];
  };
  for (int i = 0; i < steps; ++i) step();
  while (static_cast<long>(out.size()) < count) {
    for (int i = 0; i < steps; ++i) step();
    out.push_back(x);
  }
  return out;
}

SamplerSetup setup_from_hull(const Hull& hull) {
  SamplerSetup s{FloatHRep(hull.facets), {}, {}, to_double(hull.centroid), 0.0};
  const int d = hull.polytope.dim();
  s.lo.assign(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
  s.hi.assign(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
  Rational box = 1;
  std::vector<Rational> lo = hull.polytope.vertices().front(), hi = lo;
  for (const auto& v : hull.polytope.vertices())
    for (int k = 0; k < d; ++k) {
      lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(k)]);
      hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(k)]);
    }
  for (int k = 0; k < d; ++k) {
    s.lo[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)].get_d();
    s.hi[static_cast<std::size_t>(k)] = hi[static_cast<std::size_t>(k)].get_d();
    box *= hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
  }
  s.acceptance = Rational(hull.volume / box).get_d();
  return s;
}

}  // namespace

std::vector<std::vector<double>> sample_uniform(const VPolytope& P, long count, Rng& rng, const SamplerOptions& opt) {
  return run_sampler(setup_from_hull(compute_hull(P.vertices())), count, rng, opt);
}

std::vector<std::vector<double>> sample_uniform(const HPolytope& P, long count, Rng& rng, const SamplerOptions& opt) {
  return sample_uniform(vertex_enum(P), count, rng, opt);
}

}  // namespace diffbody
