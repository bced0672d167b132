#include "diffbody/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

#include "diffbody/error.hpp"

namespace diffbody {

namespace {

Rational norm_sq(const Point& v) { return dot(v, v); }

void check_direction(const Point& v) {
  if (v.empty() || std::all_of(v.begin(), v.end(), [](const Rational& c) { return sgn(c) == 0; }))
    throw Error(ErrorKind::DegenerateInput, "direction must be nonzero");
}

}  // namespace

VPolytope steiner_symmetral(const VPolytope& P, const Point& v) {
  if (static_cast<int>(v.size()) != P.dim()) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  check_direction(v);
  const HPolytope H = facet_enum(P);
  const Rational vv = norm_sq(v);
  std::vector<Halfspace> keep, upper, lower;
  for (const auto& h : H.halfspaces()) {
    const Rational alpha = dot(h.normal, v);
    const int s = sgn(alpha);
    if (s == 0) keep.push_back(h);
    else (s > 0 ? upper : lower).push_back({scale(h.normal, 1 / alpha), h.offset / alpha});
  }
  // ±⟨x,v⟩/|v|² ≤ ½[(b_u - ⟨a_u,x⟩)/α_u - (b_l - ⟨a_l,x⟩)/α_l]
  const Point vn = scale(v, 1 / vv);
  std::vector<Halfspace> out = keep;
  for (const auto& u : upper)
    for (const auto& l : lower) {
      const Point half = scale(sub(u.normal, l.normal), Rational(1, 2));
      const Rational off = (u.offset - l.offset) / 2;
      out.push_back(normalize_halfspace(add(vn, half), off));
      out.push_back(normalize_halfspace(sub(half, vn), off));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return vertex_enum(HPolytope(P.dim(), std::move(out), true));
}

VPolytope unit_cube(int n) {
  std::vector<Point> pts;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Point p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    pts.push_back(std::move(p));
  }
  return convex_hull(pts);
}

VPolytope centered_cube(int n) {
  return translate(scale(unit_cube(n), 2), Point(static_cast<std::size_t>(n), Rational(-1)));
}

VPolytope c3_body() { return steiner_symmetral(centered_cube(3), make_point({1, 1, 1})); }

SteinerCounterexample steiner_counterexample(int m, int budget_dim) {
  SteinerCounterexample r;
  r.s_cube = schneider_functional(centered_cube(3), m, budget_dim);
  r.s_sym = schneider_functional(c3_body(), m, budget_dim);
  r.increase = r.s_sym - r.s_cube;
  r.strict_increase = sgn(r.increase) > 0;
  return r;
}

LiftedPolytope::LiftedPolytope(int dim, int aux, std::vector<Halfspace> rows)
    : dim_(dim), aux_(aux), rows_(std::move(rows)) {
  for (const auto& r : rows_)
    if (static_cast<int>(r.normal.size()) != dim_ + aux_)
      throw Error(ErrorKind::DimensionMismatch, "lifted row has the wrong width");
  for (const auto& r : rows_) {
    for (const auto& c : r.normal) fa_.push_back(c.get_d());
    fb_.push_back(r.offset.get_d());
  }
}

LiftedPolytope LiftedPolytope::from(const HPolytope& H) { return LiftedPolytope(H.dim(), 0, H.halfspaces()); }

bool LiftedPolytope::contains(const Point& p) const {
  if (static_cast<int>(p.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  const auto d = static_cast<std::size_t>(dim_);
  if (aux_ > 0) {
    // max t subject to a_w·w + t ≤ c - a_p·p, t ≤ 1
    const auto k = static_cast<std::size_t>(aux_);
    const auto width = d + k;
    const std::vector<double> pf = to_double(p);
    std::vector<double> a, b, c(k + 1, 0.0);
    c[k] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      double rhs = fb_[i];
      for (std::size_t j = 0; j < d; ++j) rhs -= fa_[i * width + j] * pf[j];
      a.insert(a.end(), fa_.begin() + static_cast<long>(i * width + d), fa_.begin() + static_cast<long>((i + 1) * width));
      a.push_back(1);
      b.push_back(rhs);
    }
    a.insert(a.end(), k, 0.0);
    a.push_back(1);
    b.push_back(1);
    const FloatLpResult f = lp_solve_float(aux_ + 1, a, b, &c);
    if (f.status == LpStatus::Feasible && f.value > 1e-7) {
      const Point w = dyadic_round(std::vector<double>(f.x.begin(), f.x.begin() + static_cast<long>(k)), 40);
      bool ok = true;
      for (const auto& r : rows_) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < d; ++j)
          if (sgn(r.normal[j]) != 0) lhs += r.normal[j] * p[j];
        for (std::size_t j = 0; j < k; ++j)
          if (sgn(r.normal[d + j]) != 0) lhs += r.normal[d + j] * w[j];
        if (lhs > r.offset) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
  }
  std::vector<Halfspace> sys;
  for (const auto& r : rows_) {
    Rational rhs = r.offset;
    for (std::size_t j = 0; j < d; ++j) rhs -= r.normal[j] * p[j];
    Point w(r.normal.begin() + static_cast<long>(d), r.normal.end());
    if (std::all_of(w.begin(), w.end(), [](const Rational& c) { return sgn(c) == 0; })) {
      if (sgn(rhs) < 0) return false;
      continue;
    }
    sys.push_back({std::move(w), std::move(rhs)});
  }
  if (sys.empty()) return true;
  return lp_solve(aux_, sys).status != LpStatus::Infeasible;
}

Rational LiftedPolytope::support(const Point& u) const {
  if (static_cast<int>(u.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  Point c = u;
  c.resize(static_cast<std::size_t>(dim_ + aux_), Rational(0));
  const LpResult r = lp_feasible(dim_ + aux_, rows_, c);
  if (r.status == LpStatus::Infeasible) throw Error(ErrorKind::Infeasible, "empty lifted polytope");
  return r.value;
}

Rational LiftedPolytope::radial(const Point& u) const {
  if (static_cast<int>(u.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  const auto d = static_cast<std::size_t>(dim_);
  std::vector<Halfspace> sys;
  sys.reserve(rows_.size());
  for (const auto& r : rows_) {
    Point a(1 + static_cast<std::size_t>(aux_));
    for (std::size_t j = 0; j < d; ++j) a[0] += r.normal[j] * u[j];
    std::copy(r.normal.begin() + static_cast<long>(d), r.normal.end(), a.begin() + 1);
    sys.push_back({std::move(a), r.offset});
  }
  Point c(1 + static_cast<std::size_t>(aux_), Rational(0));
  c[0] = 1;
  const LpResult res = lp_feasible(1 + aux_, sys, c);
  if (res.status == LpStatus::Infeasible) throw Error(ErrorKind::Infeasible, "empty lifted polytope");
  return res.value;
}

bool LiftedPolytope::contains_float(const std::vector<double>& p) const {
  if (static_cast<int>(p.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  const auto d = static_cast<std::size_t>(dim_);
  const auto width = d + static_cast<std::size_t>(aux_);
  std::vector<double> a, b;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double rhs = fb_[i];
    for (std::size_t j = 0; j < d; ++j) rhs -= fa_[i * width + j] * p[j];
    if (aux_ == 0) {
      if (rhs < -1e-12) return false;
      continue;
    }
    a.insert(a.end(), fa_.begin() + static_cast<long>(i * width + d), fa_.begin() + static_cast<long>((i + 1) * width));
    b.push_back(rhs);
  }
  return aux_ == 0 || lp_solve_float(aux_, a, b).status == LpStatus::Feasible;
}

double LiftedPolytope::support_float(const std::vector<double>& u) const {
  if (static_cast<int>(u.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  std::vector<double> c = u;
  c.resize(static_cast<std::size_t>(dim_ + aux_), 0.0);
  const FloatLpResult r = lp_solve_float(dim_ + aux_, fa_, fb_, &c);
  if (r.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  if (r.status == LpStatus::Infeasible) throw Error(ErrorKind::Infeasible, "empty lifted polytope");
  return r.value;
}

double LiftedPolytope::radial_float(const std::vector<double>& u) const {
  if (static_cast<int>(u.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  const auto d = static_cast<std::size_t>(dim_);
  const auto k = static_cast<std::size_t>(aux_);
  const auto width = d + k;
  std::vector<double> a, c(k + 1, 0.0);
  c[0] = 1;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double au = 0;
    for (std::size_t j = 0; j < d; ++j) au += fa_[i * width + j] * u[j];
    a.push_back(au);
    a.insert(a.end(), fa_.begin() + static_cast<long>(i * width + d), fa_.begin() + static_cast<long>((i + 1) * width));
  }
  const FloatLpResult r = lp_solve_float(aux_ + 1, a, fb_, &c);
  if (r.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  if (r.status == LpStatus::Infeasible) throw Error(ErrorKind::Infeasible, "empty lifted polytope");
  return r.value;
}

Point fiber_coordinates(const Point& p, const Point& v) {
  const std::size_t n = v.size();
  if (n == 0 || p.size() % n != 0) throw Error(ErrorKind::DimensionMismatch, "point is not in R^{nm}");
  const Rational vv = norm_sq(v);
  Point q(p.size() / n);
  for (std::size_t i = 0; i < q.size(); ++i) {
    Rational s = 0;
    for (std::size_t k = 0; k < n; ++k) s += p[i * n + k] * v[k];
    q[i] = s / vv;
  }
  return q;
}

namespace {

// P = Mp·p + Nu·u for one copy of L, with L's auxiliaries placed at `slot`
// inside the new auxiliary block [u, w_1, w_2].
void substitute(const LiftedPolytope& L, const Matrix& Mp, const Matrix& Nu, int slot, int new_aux,
                std::vector<Halfspace>& out) {
  const auto d = static_cast<std::size_t>(L.dim());
  const std::size_t k = Nu.empty() ? 0 : Nu.front().size();
  for (const auto& r : L.rows()) {
    Point a(d + static_cast<std::size_t>(new_aux), Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (sgn(r.normal[i]) == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (sgn(Mp[i][j]) != 0) a[j] += Mp[i][j] * r.normal[i];
      for (std::size_t j = 0; j < k; ++j)
        if (sgn(Nu[i][j]) != 0) a[d + j] += Nu[i][j] * r.normal[i];
    }
    for (int j = 0; j < L.aux(); ++j)
      a[d + static_cast<std::size_t>(slot + j)] = r.normal[d + static_cast<std::size_t>(j)];
    out.push_back({std::move(a), r.offset});
  }
}

struct FiberMaps {
  Matrix E;   // nm × m, s ↦ v s^T
  Matrix EQ;  // nm × nm, projection onto v^m
  Matrix U;   // nm × (n-1)m, basis of v^{⊥m}
};

FiberMaps fiber_maps(int dim, const Point& v) {
  check_direction(v);
  const int n = static_cast<int>(v.size());
  if (dim % n != 0) throw Error(ErrorKind::DimensionMismatch, "dimension is not a multiple of n");
  const int m = dim / n;
  const Rational vv = norm_sq(v);
  const auto D = static_cast<std::size_t>(dim);
  FiberMaps f;
  f.E.assign(D, Point(static_cast<std::size_t>(m), Rational(0)));
  f.EQ.assign(D, Point(D, Rational(0)));
  f.U.assign(D, Point(static_cast<std::size_t>((n - 1) * m), Rational(0)));
  int pivot = 0;
  while (sgn(v[static_cast<std::size_t>(pivot)]) == 0) ++pivot;
  for (int i = 0; i < m; ++i) {
    const auto base = static_cast<std::size_t>(i * n);
    for (int a = 0; a < n; ++a) {
      f.E[base + static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(a)];
      for (int b = 0; b < n; ++b)
        f.EQ[base + static_cast<std::size_t>(a)][base + static_cast<std::size_t>(b)] =
            v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)] / vv;
    }
    int col = i * (n - 1);
    for (int a = 0; a < n; ++a) {
      if (a == pivot) continue;
      const auto c = static_cast<std::size_t>(col++);
      f.U[base + static_cast<std::size_t>(a)][c] = 1;
      f.U[base + static_cast<std::size_t>(pivot)][c] = -v[static_cast<std::size_t>(a)] / v[static_cast<std::size_t>(pivot)];
    }
  }
  return f;
}

Matrix affine(const Matrix& A, const Rational& a, const Rational& id) {
  Matrix out = A;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto& c : out[i]) c *= a;
    out[i][i] += id;
  }
  return out;
}

}  // namespace

// p = x + v q^T lies in S̄_v L iff x + v(q + s)^T and x + v(s - q)^T lie in L
// for some s, i.e. p + v s^T ∈ L and (I - 2EQ)p + v s^T ∈ L.
LiftedPolytope fiber_symmetral(const LiftedPolytope& L, const Point& v) {
  const FiberMaps f = fiber_maps(L.dim(), v);
  const int m = L.dim() / static_cast<int>(v.size());
  const int aux = m + 2 * L.aux();
  std::vector<Halfspace> rows;
  rows.reserve(2 * L.rows().size());
  substitute(L, identity_matrix(L.dim()), f.E, m, aux, rows);
  substitute(L, affine(f.EQ, -2, 1), f.E, m + L.aux(), aux, rows);
  return LiftedPolytope(L.dim(), aux, std::move(rows));
}

// p = z + v s^T with z = (x_1 - x_2)/2: p + y and (2EQ - I)p + y lie in L
// for some y ∈ v^{⊥m}.
LiftedPolytope adjoint_fiber_symmetral(const LiftedPolytope& L, const Point& v) {
  const FiberMaps f = fiber_maps(L.dim(), v);
  const int k = static_cast<int>(f.U.front().size());
  const int aux = k + 2 * L.aux();
  std::vector<Halfspace> rows;
  rows.reserve(2 * L.rows().size());
  substitute(L, identity_matrix(L.dim()), f.U, k, aux, rows);
  substitute(L, affine(f.EQ, 2, -1), f.U, k + L.aux(), aux, rows);
  return LiftedPolytope(L.dim(), aux, std::move(rows));
}

bool fiber_member(const VPolytope& L, const Point& v, const Point& p, bool adjoint) {
  if (static_cast<int>(p.size()) != L.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  const LiftedPolytope base = LiftedPolytope::from(facet_enum(L));
  return (adjoint ? adjoint_fiber_symmetral(base, v) : fiber_symmetral(base, v)).contains(p);
}

namespace {

struct Box {
  std::vector<double> lo, hi;
  double volume() const {
    double v = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }
};

Point unit(int dim, int i, int sign) {
  Point e = zero_point(dim);
  e[static_cast<std::size_t>(i)] = sign;
  return e;
}

Box lifted_box(const LiftedPolytope& L) {
  Box b;
  for (int i = 0; i < L.dim(); ++i) {
    b.hi.push_back(L.support(unit(L.dim(), i, 1)).get_d());
    b.lo.push_back(-L.support(unit(L.dim(), i, -1)).get_d());
  }
  return b;
}

Point box_draw(const Box& b, Rng& rng) {
  std::vector<double> x(b.lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::uniform_real_distribution<double>(b.lo[i], b.hi[i])(rng);
  return dyadic_round(x);
}

std::vector<double> sphere_draw(int d, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> u(static_cast<std::size_t>(d));
  double norm = 0;
  for (auto& c : u) {
    c = gauss(rng);
    norm += c * c;
  }
  norm = std::sqrt(norm);
  for (auto& c : u) c /= norm;
  return u;
}

template <class Pred>
long parallel_count(std::size_t count, const Pred& pred) {
  const auto workers = static_cast<std::size_t>(std::max(1, worker_count()));
  std::vector<long> hits(workers, 0);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers)
        if (pred(i)) ++hits[w];
    });
  for (auto& t : pool) t.join();
  long total = 0;
  for (long h : hits) total += h;
  return total;
}

}  // namespace

Estimate lifted_volume_mc(const LiftedPolytope& L, long samples, std::uint64_t seed) {
  const int d = L.dim();
  Moments mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
    out[0] = std::pow(L.radial_float(sphere_draw(d, rng)), d);
  });
  return product(mom.estimate(0, seed), ball_volume(d));
}

Estimate lifted_polar_volume_mc(const LiftedPolytope& L, long samples, std::uint64_t seed) {
  const int d = L.dim();
  Moments mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
    out[0] = std::pow(L.support_float(sphere_draw(d, rng)), -d);
  });
  return product(mom.estimate(0, seed), ball_volume(d));
}

bool in_polar_of_fiber_symmetral(const VPolytope& L, const LiftedPolytope& sym, const Point& v, const Point& y) {
  const FiberMaps f = fiber_maps(L.dim(), v);
  const auto D = static_cast<std::size_t>(L.dim());
  const std::size_t k = f.U.front().size();
  const Point y1 = scale(y, Rational(1, 2));
  Point y2 = y1;
  const Point proj = apply(f.EQ, y);
  for (std::size_t i = 0; i < D; ++i) y2[i] -= proj[i];
  // min α + β over (t, α, β): ⟨w, y1 + Ut⟩ ≤ α and ⟨w, y2 - Ut⟩ ≤ β for all vertices w
  const std::vector<double> y1f = to_double(y1), y2f = to_double(y2);
  std::vector<double> a, b, c(k + 2, 0.0);
  c[k] = c[k + 1] = -1;
  for (const auto& w : L.vertices()) {
    std::vector<double> uw(k, 0.0);
    double w1 = 0, w2 = 0;
    for (std::size_t i = 0; i < D; ++i) {
      const double wi = w[i].get_d();
      w1 += wi * y1f[i];
      w2 += wi * y2f[i];
      for (std::size_t j = 0; j < k; ++j) uw[j] += wi * f.U[i][j].get_d();
    }
    for (int side = 0; side < 2; ++side) {
      for (std::size_t j = 0; j < k; ++j) a.push_back(side == 0 ? uw[j] : -uw[j]);
      a.push_back(side == 0 ? -1.0 : 0.0);
      a.push_back(side == 0 ? 0.0 : -1.0);
      b.push_back(side == 0 ? -w1 : -w2);
    }
  }
  const FloatLpResult r = lp_solve_float(static_cast<int>(k + 2), a, b, &c);
  if (r.status == LpStatus::Feasible && -r.value < 1 - 1e-9) {
    const Point t = dyadic_round(std::vector<double>(r.x.begin(), r.x.begin() + static_cast<long>(k)), 40);
    const Point z = apply(f.U, t);
    const Point q1 = add(y1, z), q2 = sub(y2, z);
    Rational h1 = dot(L.vertices().front(), q1), h2 = dot(L.vertices().front(), q2);
    for (const auto& w : L.vertices()) {
      Rational s1 = dot(w, q1), s2 = dot(w, q2);
      if (s1 > h1) h1 = std::move(s1);
      if (s2 > h2) h2 = std::move(s2);
    }
    if (h1 + h2 <= 1) return true;
  }
  return sym.support(y) <= 1;
}

FiberProbeReport fiber_polar_inclusion_probe(const VPolytope& L, const Point& v, long samples, std::uint64_t seed,
                                             const VPolytope* K) {
  if (!is_origin_symmetric(L)) throw Error(ErrorKind::NotOriginSymmetric, "the probe needs an origin-symmetric body");
  check_direction(v);
  const int n = static_cast<int>(v.size());
  if (L.dim() % n != 0) throw Error(ErrorKind::DimensionMismatch, "dimension is not a multiple of n");
  FiberProbeReport r;
  const LiftedPolytope base = LiftedPolytope::from(facet_enum(L));
  const LiftedPolytope sym = fiber_symmetral(base, v);

  const LiftedPolytope adj = adjoint_fiber_symmetral(LiftedPolytope::from(polar_dual(L)), v);
  const Box abox = lifted_box(adj);
  Moments mom = monte_carlo(samples, seed, 2, [&](Rng& rng, double* out) {
    const Point p = box_draw(abox, rng);
    out[0] = out[1] = 0;
    if (!adj.contains_float(to_double(p)) || !adj.contains(p)) return;
    out[0] = 1;
    if (!in_polar_of_fiber_symmetral(L, sym, v, p)) out[1] = 1;
  });
  r.inclusion_tested = std::lround(mom.mean(0) * static_cast<double>(mom.count()));
  r.inclusion_failures = std::lround(mom.mean(1) * static_cast<double>(mom.count()));

  r.polar_volume = polar_volume_exact(L);
  r.polar_sym_volume = lifted_polar_volume_mc(sym, samples, seed + 1);
  r.polar_volume_holds = r.polar_sym_volume.value >= r.polar_volume.get_d() - 3 * r.polar_sym_volume.std_error;
  r.volume = volume_exact(L);
  r.sym_volume = lifted_volume_mc(sym, samples, seed + 2);
  r.volume_holds = r.sym_volume.value >= r.volume.get_d() - 3 * r.sym_volume.std_error;

  if (K) {
    if (K->dim() != n) throw Error(ErrorKind::DimensionMismatch, "K must live in R^n");
    const int m = L.dim() / n;
    const VPolytope dsk = build_mdiff(BodyCollection::uniform(Body::polytope(steiner_symmetral(*K, v)), m));
    const HPolytope dsk_h = facet_enum(dsk);
    const LiftedPolytope target =
        fiber_symmetral(LiftedPolytope::from(facet_enum(build_mdiff(BodyCollection::uniform(Body::polytope(*K), m)))), v);
    Rng rng = stream_rng(seed + 3, 0);
    std::vector<Point> pts;
    for (const auto& x : sample_uniform(dsk_h, samples, rng)) {
      Point p = dyadic_round(x);
      if (dsk_h.contains(p)) pts.push_back(std::move(p));
    }
    r.mdiff_tested = static_cast<long>(pts.size());
    r.mdiff_failures = parallel_count(pts.size(), [&](std::size_t i) { return !target.contains(pts[i]); });
  }
  return r;
}

std::vector<Estimate> c0_probe(const VPolytope& L, const std::vector<Point>& directions, long samples,
                               std::uint64_t seed) {
  const double d = L.dim();
  const double vol = volume_exact(L).get_d();
  LiftedPolytope cur = LiftedPolytope::from(facet_enum(L));
  std::vector<Estimate> out;
  for (std::size_t k = 0; k < directions.size(); ++k) {
    cur = fiber_symmetral(cur, directions[k]);
    const Estimate e = lifted_volume_mc(cur, samples, seed + k);
    Estimate r = e;
    r.value = std::pow(std::max(e.value, 0.0) / vol, 1 / d);
    r.std_error = e.value > 0 ? r.value * e.std_error / (d * e.value) : 0;
    out.push_back(r);
  }
  return out;
}

void ShadowSystemSpec::validate() const {
  if (base.size() == 0) throw Error(ErrorKind::EmptyInput, "shadow system without a base");
  if (static_cast<int>(direction.size()) != base.dim()) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  check_direction(direction);
  if (speeds.size() != base.size()) throw Error(ErrorKind::DimensionMismatch, "one speed per vertex");
  if (!(t_min < t_max)) throw Error(ErrorKind::ConfigInvalid, "empty time interval");
}

std::vector<Point> shadow_system_points(const ShadowSystemSpec& spec, const Rational& t) {
  spec.validate();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < spec.base.size(); ++i)
    pts.push_back(add(spec.base.vertices()[i], scale(spec.direction, spec.speeds[i] * t)));
  return pts;
}

VPolytope shadow_system_at(const ShadowSystemSpec& spec, const Rational& t) {
  const std::vector<Point> pts = shadow_system_points(spec, t);
  return VPolytope::from_canonical(spec.base.dim(), extreme_points(pts));
}

bool symmetric_speeds(const ShadowSystemSpec& spec) {
  spec.validate();
  if (!is_origin_symmetric(spec.base)) return false;
  const auto& vs = spec.base.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto j = static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), negate(vs[i]), lex_less) - vs.begin());
    if (spec.speeds[j] != -spec.speeds[i]) return false;
  }
  return true;
}

ShadowProbeReport shadow_convexity_probe(const ShadowSystemSpec& spec, int grid_points, int m, long samples,
                                         std::uint64_t seed) {
  spec.validate();
  if (grid_points < 3 || grid_points % 2 == 0) throw Error(ErrorKind::ConfigInvalid, "grid needs an odd number >= 3 of points");
  ShadowProbeReport r;
  const int G = grid_points;
  std::vector<VPolytope> bodies;
  std::vector<bool> full(static_cast<std::size_t>(G), false);
  for (int k = 0; k < G; ++k) {
    const Rational t = spec.t_min + (spec.t_max - spec.t_min) * Rational(k, G - 1);
    r.grid.push_back(t);
    const std::vector<Point> pts = shadow_system_points(spec, t);
    try {
      const Hull h = compute_hull(pts);
      r.volumes.push_back(h.volume);
      bodies.push_back(h.polytope);
      full[static_cast<std::size_t>(k)] = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateInput) throw;
      r.volumes.push_back(0);
      bodies.push_back(VPolytope::from_canonical(spec.base.dim(), extreme_points(pts)));
    }
  }
  r.volume_convex = true;
  for (int k = 1; k + 1 < G; ++k)
    if (r.volumes[static_cast<std::size_t>(k - 1)] + r.volumes[static_cast<std::size_t>(k + 1)] <
        2 * r.volumes[static_cast<std::size_t>(k)])
      r.volume_convex = false;

  r.skipped.assign(static_cast<std::size_t>(G), true);
  if (m <= 0 || !symmetric_speeds(spec)) return r;

  std::vector<BodyCollection> colls;
  std::vector<int> index(static_cast<std::size_t>(G), -1);
  double rate = std::numeric_limits<double>::infinity();
  for (int k = 0; k < G; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    if (!full[ks] || !origin_interior(bodies[ks])) continue;
    r.skipped[ks] = false;
    index[ks] = static_cast<int>(colls.size());
    const Body b = Body::polytope(bodies[ks]);
    rate = std::min(rate, inradius(b));
    colls.push_back(BodyCollection::uniform(b, m));
  }
  if (colls.empty()) return r;
  const Moments mom = polar_volume_mc_joint(colls, 0, std::vector<double>(static_cast<std::size_t>(m), rate), samples, seed);
  r.inverse_polar.resize(static_cast<std::size_t>(G));
  for (int k = 0; k < G; ++k) {
    const int c = index[static_cast<std::size_t>(k)];
    if (c < 0) continue;
    const double V = mom.mean(c);
    Estimate e;
    e.value = 1 / V;
    e.std_error = std::sqrt(mom.mean_cov(c, c)) / (V * V);
    e.samples = mom.count();
    e.seed = seed;
    r.inverse_polar[static_cast<std::size_t>(k)] = e;
  }
  r.polar_checked = true;
  r.polar_convex = true;
  for (int k = 1; k + 1 < G; ++k) {
    const int ids[3] = {index[static_cast<std::size_t>(k - 1)], index[static_cast<std::size_t>(k)],
                        index[static_cast<std::size_t>(k + 1)]};
    if (ids[0] < 0 || ids[1] < 0 || ids[2] < 0) continue;
    const double coef[3] = {1, -2, 1};
    double value = 0, var = 0, grad[3];
    for (int a = 0; a < 3; ++a) {
      const double V = mom.mean(ids[a]);
      value += coef[a] / V;
      grad[a] = -coef[a] / (V * V);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) var += grad[a] * grad[b] * mom.mean_cov(ids[a], ids[b]);
    const double err = std::sqrt(std::max(var, 0.0));
    r.second_differences.push_back(value);
    r.second_difference_errors.push_back(err);
    if (value < -3 * err) r.polar_convex = false;
  }
  return r;
}

namespace {

Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Direction key with first nonzero entry positive and primitive scaling.
Point direction_key(const Point& g) {
  Halfspace h = normalize_halfspace(g, 0);
  for (const auto& c : h.normal)
    if (sgn(c) != 0) {
      if (sgn(c) < 0) h.normal = negate(h.normal);
      break;
    }
  return h.normal;
}

}  // namespace

std::vector<Point> projection_generators(const VPolytope& P) {
  if (P.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "projection bodies are built in R^3 only");
  const Hull hull = compute_hull(P.vertices());
  const auto& facets = hull.facets.halfspaces();
  std::vector<Point> area(facets.size(), zero_point(3));
  for (std::size_t s = 0; s < hull.boundary_simplices.size(); ++s) {
    const auto& idx = hull.boundary_simplices[s];
    const Point& a = hull.support_points[static_cast<std::size_t>(idx[0])];
    Point g = scale(cross(sub(hull.support_points[static_cast<std::size_t>(idx[1])], a),
                          sub(hull.support_points[static_cast<std::size_t>(idx[2])], a)),
                    Rational(1, 2));
    const auto f = static_cast<std::size_t>(hull.simplex_facet[s]);
    if (sgn(dot(g, facets[f].normal)) < 0) g = negate(g);
    area[f] = add(area[f], g);
  }
  // Parallel segments add up: [-g/2, g/2] + [-λg/2, λg/2] = (1+|λ|)[-g/2, g/2].
  std::map<Point, Point, bool (*)(const Point&, const Point&)> merged(lex_less);
  for (const auto& g : area) {
    const Point key = direction_key(g);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, g);
      continue;
    }
    Point aligned = sgn(dot(g, it->second)) < 0 ? negate(g) : g;
    it->second = add(it->second, aligned);
  }
  std::vector<Point> out;
  for (auto& [key, g] : merged) out.push_back(sgn(dot(g, key)) < 0 ? negate(g) : g);
  return out;
}

VPolytope projection_body_3d(const VPolytope& P) {
  const std::vector<Point> gens = projection_generators(P);
  Point shift = zero_point(3);
  for (const auto& g : gens) shift = sub(shift, scale(g, Rational(1, 2)));
  return translate(zonotope(gens), shift);
}

Rational petty_product(const VPolytope& P) {
  const Rational vol = volume_exact(P);
  return zonotope_volume(projection_generators(P)) / (vol * vol);
}

double petty_product_ball() { return 3 * std::numbers::pi * std::numbers::pi / 4; }

Rational zonotope_volume(const std::vector<Point>& generators) {
  if (generators.empty()) return 0;
  const int d = static_cast<int>(generators.front().size());
  const int N = static_cast<int>(generators.size());
  if (N < d) return 0;
  Rational total = 0;
  std::vector<int> pick(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) pick[static_cast<std::size_t>(i)] = i;
  Matrix M(static_cast<std::size_t>(d), Point(static_cast<std::size_t>(d)));
  while (true) {
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            generators[static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])][static_cast<std::size_t>(r)];
    total += abs(determinant(M));
    int i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == N - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return total;
}

VPolytope zonotope(const std::vector<Point>& generators) {
  if (generators.empty()) throw Error(ErrorKind::EmptyInput, "zonotope without generators");
  const int d = static_cast<int>(generators.front().size());
  std::vector<Point> pts{zero_point(d)};
  for (const auto& g : generators) {
    std::vector<Point> next = pts;
    for (const auto& p : pts) next.push_back(add(p, g));
    pts = extreme_points(next);
  }
  if (static_cast<int>(pts.size()) <= d) throw Error(ErrorKind::DegenerateInput, "generators do not span");
  return convex_hull(pts);
}

// D²(Σ[0,g_i]) = Δ(Z) + (-Z)×(-Z) is the zonotope with generators (g,g), (g,0), (0,g).
Rational zonotope_schneider_32(const std::vector<Point>& generators) {
  std::vector<Point> lifted;
  for (const auto& g : generators) {
    if (g.size() != 3) throw Error(ErrorKind::DimensionMismatch, "generators must lie in R^3");
    Point gg = g, g0 = g, zg = zero_point(3);
    gg.insert(gg.end(), g.begin(), g.end());
    g0.resize(6, Rational(0));
    zg.insert(zg.end(), g.begin(), g.end());
    lifted.push_back(std::move(gg));
    lifted.push_back(std::move(g0));
    lifted.push_back(std::move(zg));
  }
  const Rational vol = zonotope_volume(generators);
  if (sgn(vol) == 0) throw Error(ErrorKind::DegenerateInput, "generators do not span R^3");
  return zonotope_volume(lifted) / (vol * vol);
}

EliVerdict eli_identity_check(const VPolytope& K, int budget_dim) {
  if (K.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "the identity concerns bodies in R^3");
  if (!is_origin_symmetric(K)) throw Error(ErrorKind::NotOriginSymmetric, "the identity needs an origin-symmetric body");
  EliVerdict v;
  v.schneider = schneider_functional(K, 2, budget_dim);
  v.petty = petty_product(K);
  v.lhs = 4 * v.schneider;
  v.rhs = 84 + 3 * v.petty;
  v.equal = v.lhs == v.rhs;
  return v;
}

}  // namespace diffbody
