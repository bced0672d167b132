#include "diffbody/mdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diffbody/error.hpp"

namespace diffbody {

Body Body::polytope(VPolytope P) {
  Body b;
  b.fv_ = std::make_shared<const FloatVRep>(P);
  b.v_ = std::move(P);
  return b;
}

Body Body::ball(int dim, Rational radius) {
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "ball dimension must be positive");
  if (sgn(radius) <= 0) throw Error(ErrorKind::DegenerateInput, "ball radius must be positive");
  Body b;
  b.v_ = Ball{dim, std::move(radius)};
  return b;
}

int Body::dim() const { return is_ball() ? std::get<Ball>(v_).dim : std::get<VPolytope>(v_).dim(); }

const VPolytope& Body::poly() const {
  if (is_ball()) throw Error(ErrorKind::BallUnsupported, "operation needs a polytope");
  return std::get<VPolytope>(v_);
}

const Ball& Body::as_ball() const { return std::get<Ball>(v_); }

Rational Body::volume_exact() const { return diffbody::volume_exact(poly()); }

double Body::volume() const {
  if (!is_ball()) return volume_exact().get_d();
  const Ball& b = as_ball();
  const double n = b.dim;
  return std::pow(std::numbers::pi, n / 2) / std::tgamma(1 + n / 2) * std::pow(b.radius.get_d(), n);
}

double Body::support(const double* u) const {
  if (!is_ball()) return fv_->support(u);
  const Ball& b = as_ball();
  double s = 0;
  for (int i = 0; i < b.dim; ++i) s += u[i] * u[i];
  return b.radius.get_d() * std::sqrt(s);
}

BodyCollection BodyCollection::uniform(const Body& K, int m) {
  if (m < 1) throw Error(ErrorKind::DimensionMismatch, "order m must be at least 1");
  return BodyCollection{K.dim(), m, std::vector<Body>(static_cast<std::size_t>(m + 1), K)};
}

void BodyCollection::validate() const {
  if (m < 1) throw Error(ErrorKind::DimensionMismatch, "order m must be at least 1");
  if (static_cast<int>(bodies.size()) != m + 1)
    throw Error(ErrorKind::DimensionMismatch, "collection needs m+1 bodies");
  for (const auto& b : bodies)
    if (b.dim() != n) throw Error(ErrorKind::DimensionMismatch, "bodies of differing dimension");
}

bool BodyCollection::all_polytopes() const {
  return std::none_of(bodies.begin(), bodies.end(), [](const Body& b) { return b.is_ball(); });
}

bool BodyCollection::equal_balls() const {
  if (bodies.empty() || !bodies.front().is_ball()) return false;
  return std::all_of(bodies.begin(), bodies.end(), [&](const Body& b) {
    return b.is_ball() && b.as_ball().radius == bodies.front().as_ball().radius;
  });
}

VPolytope build_mdiff(const BodyCollection& K) {
  K.validate();
  if (!K.all_polytopes()) throw Error(ErrorKind::BallUnsupported, "D^m has no exact V-representation for balls");
  const int n = K.n, m = K.m;
  std::vector<Point> pts{Point(static_cast<std::size_t>(n * m))};
  std::vector<Point> next;
  for (int i = 1; i <= m; ++i) {
    next.clear();
    for (const auto& p : pts)
      for (const auto& v : K.bodies[static_cast<std::size_t>(i)].poly().vertices()) {
        Point q = p;
        for (int k = 0; k < n; ++k) q[static_cast<std::size_t>((i - 1) * n + k)] -= v[static_cast<std::size_t>(k)];
        next.push_back(std::move(q));
      }
    pts.swap(next);
  }
  next.clear();
  for (const auto& p : pts)
    for (const auto& v : K.bodies[0].poly().vertices()) {
      Point q = p;
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) q[static_cast<std::size_t>(i * n + k)] += v[static_cast<std::size_t>(k)];
      next.push_back(std::move(q));
    }
  return VPolytope::from_canonical(n * m, compute_hull(next).polytope.vertices());
}

namespace {

Rational support_exact(const VPolytope& P, const Point& u) {
  Rational best = dot(P.vertices().front(), u);
  for (const auto& v : P.vertices()) {
    Rational s = dot(v, u);
    if (s > best) best = std::move(s);
  }
  return best;
}

}  // namespace

Rational mdiff_support(const BodyCollection& K, const Point& theta) {
  K.validate();
  if (static_cast<int>(theta.size()) != K.n * K.m) throw Error(ErrorKind::DimensionMismatch, "theta must have n*m entries");
  if (!K.all_polytopes()) throw Error(ErrorKind::BallUnsupported, "exact support needs polytopes; use the float overload");
  const auto n = static_cast<std::size_t>(K.n);
  Point total = zero_point(K.n);
  Rational h = 0;
  for (int i = 0; i < K.m; ++i) {
    Point block(theta.begin() + static_cast<long>(i * n), theta.begin() + static_cast<long>((i + 1) * n));
    total = add(total, block);
    h += support_exact(K.bodies[static_cast<std::size_t>(i + 1)].poly(), negate(block));
  }
  return h + support_exact(K.bodies[0].poly(), total);
}

double mdiff_support(const BodyCollection& K, const std::vector<double>& theta) {
  K.validate();
  if (static_cast<int>(theta.size()) != K.n * K.m) throw Error(ErrorKind::DimensionMismatch, "theta must have n*m entries");
  const auto n = static_cast<std::size_t>(K.n);
  std::vector<double> total(n, 0.0), neg(n);
  double h = 0;
  for (int i = 0; i < K.m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      total[k] += theta[static_cast<std::size_t>(i) * n + k];
      neg[k] = -theta[static_cast<std::size_t>(i) * n + k];
    }
    h += K.bodies[static_cast<std::size_t>(i + 1)].support(neg.data());
  }
  return h + K.bodies[0].support(total.data());
}

namespace {

template <class T>
T magnitude(const T& x) {
  if constexpr (std::is_floating_point_v<T>) return std::abs(x);
  else return abs(x);
}

// Circumcenter of an affinely independent subset, inside its affine hull.
template <class T, class Vec>
bool circumball(const std::vector<Vec>& pts, const std::vector<int>& subset, Vec& center, T& r2) {
  const std::size_t d = pts.front().size();
  const Vec& p0 = pts[static_cast<std::size_t>(subset[0])];
  const std::size_t k = subset.size() - 1;
  // Gram system  G λ = g/2 with G_jl = <e_j, e_l>, g_j = |e_j|²
  std::vector<std::vector<T>> G(k, std::vector<T>(k + 1));
  std::vector<Vec> e(k, Vec(d));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < d; ++c) e[j][c] = pts[static_cast<std::size_t>(subset[j + 1])][c] - p0[c];
  for (std::size_t j = 0; j < k; ++j) {
    T g = 0;
    for (std::size_t l = 0; l < k; ++l) {
      T s = 0;
      for (std::size_t c = 0; c < d; ++c) s += e[j][c] * e[l][c];
      G[j][l] = s;
    }
    for (std::size_t c = 0; c < d; ++c) g += e[j][c] * e[j][c];
    G[j][k] = g / 2;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c; r < k; ++r)
      if (magnitude(G[r][c]) > magnitude(G[piv][c])) piv = r;
    if (G[piv][c] == T(0)) return false;
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(G[piv][c]) < 1e-13) return false;
    }
    std::swap(G[piv], G[c]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || G[r][c] == T(0)) continue;
      T f = G[r][c] / G[c][c];
      for (std::size_t l = c; l <= k; ++l) G[r][l] -= f * G[c][l];
    }
  }
  center = p0;
  for (std::size_t j = 0; j < k; ++j) {
    T lambda = G[j][k] / G[j][j];
    for (std::size_t c = 0; c < d; ++c) center[c] += lambda * e[j][c];
  }
  r2 = 0;
  for (std::size_t c = 0; c < d; ++c) r2 += (center[c] - p0[c]) * (center[c] - p0[c]);
  return true;
}

template <class T, class Vec>
T miniball_impl(const std::vector<Vec>& pts, T slack) {
  if (pts.empty()) throw Error(ErrorKind::EmptyInput, "miniball of no points");
  const int count = static_cast<int>(pts.size());
  const int d = static_cast<int>(pts.front().size());
  bool have = false;
  T best = 0;
  Vec center;
  T r2;
  for (unsigned mask = 1; mask < (1u << count); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < count; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    if (static_cast<int>(subset.size()) > d + 1) continue;
    if (!circumball<T>(pts, subset, center, r2)) continue;
    if (have && !(r2 < best)) continue;
    bool encloses = true;
    for (const auto& p : pts) {
      T s = 0;
      for (int c = 0; c < d; ++c) s += (p[static_cast<std::size_t>(c)] - center[static_cast<std::size_t>(c)]) * (p[static_cast<std::size_t>(c)] - center[static_cast<std::size_t>(c)]);
      if (s > r2 + slack * (1 + r2)) {
        encloses = false;
        break;
      }
    }
    if (encloses) {
      best = r2;
      have = true;
    }
  }
  return best;
}

}  // namespace

Rational miniball_radius_sq(const std::vector<Point>& pts) { return miniball_impl<Rational>(pts, Rational(0)); }

double miniball_radius_sq(const std::vector<std::vector<double>>& pts) { return miniball_impl<double>(pts, 1e-12); }

MdiffOracle::MdiffOracle(const BodyCollection& K) : n_(K.n), m_(K.m), balls_(false) {
  K.validate();
  if (K.equal_balls()) {
    balls_ = true;
    radius_sq_ = K.bodies[0].as_ball().radius * K.bodies[0].as_ball().radius;
    radius_sq_d_ = radius_sq_.get_d();
    return;
  }
  if (!K.all_polytopes())
    throw Error(ErrorKind::MixedVariantsUnsupported, "membership needs all polytopes or all equal balls");
  for (const auto& b : K.bodies) reps_.push_back(facet_enum(b.poly()));
}

bool MdiffOracle::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != n_ * m_) throw Error(ErrorKind::DimensionMismatch, "point must have n*m entries");
  const auto n = static_cast<std::size_t>(n_);
  if (balls_) {
    std::vector<Point> pts{zero_point(n_)};
    for (int i = 0; i < m_; ++i) pts.emplace_back(x.begin() + static_cast<long>(i * n), x.begin() + static_cast<long>((i + 1) * n));
    return miniball_radius_sq(pts) <= radius_sq_;
  }
  // a ∈ K_0 and a - x_i ∈ K_i
  std::vector<Halfspace> cons(reps_[0].halfspaces());
  for (int i = 0; i < m_; ++i) {
    Point xi(x.begin() + static_cast<long>(i * n), x.begin() + static_cast<long>((i + 1) * n));
    for (const auto& h : reps_[static_cast<std::size_t>(i + 1)].halfspaces()) cons.push_back({h.normal, h.offset + dot(h.normal, xi)});
  }
  return lp_solve(n_, cons).status == LpStatus::Feasible;
}

bool MdiffOracle::contains(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_ * m_) throw Error(ErrorKind::DimensionMismatch, "point must have n*m entries");
  if (balls_) {
    const auto n = static_cast<std::size_t>(n_);
    std::vector<std::vector<double>> pts{std::vector<double>(n, 0.0)};
    for (int i = 0; i < m_; ++i) pts.emplace_back(x.begin() + static_cast<long>(i * n), x.begin() + static_cast<long>((i + 1) * n));
    return miniball_radius_sq(pts) <= radius_sq_d_;
  }
  return contains(dyadic_round(x));
}

bool mdiff_member(const BodyCollection& K, const Point& x) { return MdiffOracle(K).contains(x); }
bool mdiff_member(const BodyCollection& K, const std::vector<double>& x) { return MdiffOracle(K).contains(x); }

Rational schneider_functional(const VPolytope& K, int m, int budget_dim) {
  if (K.dim() * m > budget_dim)
    throw Error(ErrorKind::BudgetExceeded, "n*m = " + std::to_string(K.dim() * m) + " exceeds the exact budget " + std::to_string(budget_dim));
  const Rational vol = volume_exact(K);
  Rational denom = 1;
  for (int i = 0; i < m; ++i) denom *= vol;
  return compute_hull(build_mdiff(BodyCollection::uniform(Body::polytope(K), m)).vertices()).volume / denom;
}

Estimate schneider_functional_mc(const Body& K, int m, long samples, std::uint64_t seed) {
  const int n = K.dim();
  const auto N = static_cast<std::size_t>(n * m);
  BodyCollection coll = BodyCollection::uniform(K, m);
  MdiffOracle oracle(coll);
  Moments mom(1);
  double box = 1;  // S = P(inside) * box
  if (K.is_ball()) {
    // each x_i uniform in the ball of radius 2r; S = p · 2^{nm}
    const double r = K.as_ball().radius.get_d();
    box = std::pow(2.0, static_cast<double>(N));
    mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
      std::normal_distribution<double> g;
      std::uniform_real_distribution<double> u;
      std::vector<double> x(N);
      for (int i = 0; i < m; ++i) {
        double norm = 0;
        for (int k = 0; k < n; ++k) norm += std::pow(x[static_cast<std::size_t>(i * n + k)] = g(rng), 2);
        const double rad = 2 * r * std::pow(u(rng), 1.0 / n) / std::sqrt(norm);
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(i * n + k)] *= rad;
      }
      out[0] = oracle.contains(x) ? 1.0 : 0.0;
    });
  } else {
    const VPolytope& P = K.poly();
    std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      Rational a = P.vertices().front()[static_cast<std::size_t>(k)], b = a;
      for (const auto& v : P.vertices()) {
        a = std::min(a, v[static_cast<std::size_t>(k)]);
        b = std::max(b, v[static_cast<std::size_t>(k)]);
      }
      hi[static_cast<std::size_t>(k)] = Rational(b - a).get_d();
      lo[static_cast<std::size_t>(k)] = -hi[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < n; ++k) box *= std::pow(2 * hi[static_cast<std::size_t>(k)], m);
    box /= std::pow(K.volume(), m);
    mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
      std::uniform_real_distribution<double> u;
      std::vector<double> x(N);
      for (std::size_t j = 0; j < N; ++j) x[j] = lo[j % static_cast<std::size_t>(n)] + (hi[j % static_cast<std::size_t>(n)] - lo[j % static_cast<std::size_t>(n)]) * u(rng);
      out[0] = oracle.contains(x) ? 1.0 : 0.0;
    });
  }
  return product(mom.estimate(0, seed), box);
}

Matrix projection_matrix(int n, int m) {
  if (n < 1 || m < 1) throw Error(ErrorKind::DimensionMismatch, "n and m must be positive");
  Matrix P(static_cast<std::size_t>(n * m), Point(static_cast<std::size_t>(n * (m + 1)), Rational(0)));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) {
      P[static_cast<std::size_t>(i * n + k)][static_cast<std::size_t>(k)] = 1;
      P[static_cast<std::size_t>(i * n + k)][static_cast<std::size_t>((i + 1) * n + k)] = -1;
    }
  return P;
}

VPolytope product_polytope(const std::vector<VPolytope>& factors) {
  if (factors.empty()) throw Error(ErrorKind::EmptyInput, "empty product");
  std::vector<Point> pts{Point{}};
  int dim = 0;
  for (const auto& F : factors) {
    std::vector<Point> next;
    for (const auto& p : pts)
      for (const auto& v : F.vertices()) {
        Point q = p;
        q.insert(q.end(), v.begin(), v.end());
        next.push_back(std::move(q));
      }
    pts.swap(next);
    dim += F.dim();
  }
  std::sort(pts.begin(), pts.end(), lex_less);
  return VPolytope::from_canonical(dim, std::move(pts));
}

MonotonicityVerdict monotonicity_check(const Body& K, int m, MonotonicityMode mode, long samples, std::uint64_t seed,
                                       int budget_dim) {
  if (m < 1) throw Error(ErrorKind::DimensionMismatch, "order m must be at least 1");
  MonotonicityVerdict v;
  v.mode = mode;
  if (mode == MonotonicityMode::Exact) {
    if (K.dim() * (m + 1) > budget_dim)
      throw Error(ErrorKind::BudgetExceeded, "n*(m+1) exceeds the exact budget");
    const Rational hi = schneider_functional(K.poly(), m + 1, budget_dim);
    const Rational lo = schneider_functional(K.poly(), m, budget_dim);
    v.lhs_exact = 1;
    v.rhs_exact = 1;
    for (int i = 0; i < m; ++i) v.lhs_exact *= hi;
    for (int i = 0; i <= m; ++i) v.rhs_exact *= lo;
    v.holds = v.lhs_exact <= v.rhs_exact;
    return v;
  }
  const Estimate hi = schneider_functional_mc(K, m + 1, samples, seed);
  const Estimate lo = schneider_functional_mc(K, m, samples, seed + 1);
  auto power = [](const Estimate& e, int k) {
    Estimate r = e;
    r.value = std::pow(e.value, k);
    r.std_error = k * std::pow(e.value, k - 1) * e.std_error;
    return r;
  };
  v.lhs_mc = power(hi, m);
  v.rhs_mc = power(lo, m + 1);
  v.holds = v.lhs_mc.value - v.rhs_mc.value <= 3 * std::hypot(v.lhs_mc.std_error, v.rhs_mc.std_error);
  return v;
}

}  // namespace diffbody
