#include "diffbody/polar.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "diffbody/error.hpp"

namespace diffbody {

HPolytope polar_dual(const VPolytope& P) {
  if (!origin_interior(P)) throw Error(ErrorKind::OriginNotInterior, "polar needs the origin in the interior");
  std::vector<Halfspace> hs;
  hs.reserve(P.size());
  for (const auto& v : P.vertices()) hs.push_back({v, 1});
  return HPolytope(P.dim(), std::move(hs), true);
}

VPolytope polar_dual(const HPolytope& H) {
  std::vector<Point> pts;
  pts.reserve(H.size());
  for (const auto& h : H.halfspaces()) {
    if (sgn(h.offset) <= 0) throw Error(ErrorKind::OriginNotInterior, "polar needs the origin in the interior");
    pts.push_back(scale(h.normal, 1 / h.offset));
  }
  return VPolytope::from_canonical(H.dim(), compute_hull(pts).polytope.vertices());
}

bool origin_interior(const VPolytope& P) {
  const HPolytope H = facet_enum(P);
  for (const auto& h : H.halfspaces())
    if (sgn(h.offset) <= 0) return false;
  return true;
}

double inradius(const Body& K) {
  if (K.is_ball()) return K.as_ball().radius.get_d();
  double best = std::numeric_limits<double>::infinity();
  const HPolytope H = facet_enum(K.poly());
  for (const auto& h : H.halfspaces()) {
    double norm = 0;
    for (const auto& c : h.normal) norm += c.get_d() * c.get_d();
    best = std::min(best, h.offset.get_d() / std::sqrt(norm));
  }
  return best;
}

Rational polar_volume_exact(const VPolytope& P) { return volume_exact(vertex_enum(polar_dual(P))); }

double ball_volume(int n) { return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(1 + n / 2.0); }

double sphere_area(int n) { return 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }

namespace {

void check_q(int n, double q) {
  if (!(q >= 0 && q < n)) throw Error(ErrorKind::InvalidQ, "q must lie in [0, n)");
}

void check_origin(const BodyCollection& K) {
  for (const auto& b : K.bodies)
    if (!b.is_ball() && !origin_interior(b.poly()))
      throw Error(ErrorKind::OriginNotInterior, "every body must contain the origin in its interior");
}

}  // namespace

Moments polar_volume_mc_joint(const std::vector<BodyCollection>& Ks, double q, const std::vector<double>& rates,
                              long samples, std::uint64_t seed) {
  if (Ks.empty()) throw Error(ErrorKind::EmptyInput, "no collections");
  const int n = Ks.front().n, m = Ks.front().m;
  for (const auto& K : Ks) {
    K.validate();
    if (K.n != n || K.m != m) throw Error(ErrorKind::DimensionMismatch, "collections of differing shape");
  }
  if (static_cast<int>(rates.size()) != m) throw Error(ErrorKind::DimensionMismatch, "one rate per block");
  check_q(n, q);
  const double a = n - q;
  double log_norm = -std::lgamma(1 + m * a);
  for (double b : rates) log_norm += std::lgamma(a) + std::log(sphere_area(n)) - a * std::log(b);
  const auto nn = static_cast<std::size_t>(n);
  const int channels = static_cast<int>(Ks.size());

  return monte_carlo(samples, seed, channels, [&](Rng& rng, double* out) {
    std::normal_distribution<double> gauss;
    std::vector<double> x(nn * static_cast<std::size_t>(m)), sum(nn, 0.0), neg(nn);
    double lin = 0;
    for (int i = 0; i < m; ++i) {
      std::gamma_distribution<double> radius(a, 1 / rates[static_cast<std::size_t>(i)]);
      double norm = 0;
      double* xi = &x[static_cast<std::size_t>(i) * nn];
      for (std::size_t k = 0; k < nn; ++k) {
        xi[k] = gauss(rng);
        norm += xi[k] * xi[k];
      }
      const double r = radius(rng);
      const double s = r / std::sqrt(norm);
      for (std::size_t k = 0; k < nn; ++k) {
        xi[k] *= s;
        sum[k] += xi[k];
      }
      lin += rates[static_cast<std::size_t>(i)] * r;
    }
    for (int c = 0; c < channels; ++c) {
      const BodyCollection& K = Ks[static_cast<std::size_t>(c)];
      double e = -K.bodies[0].support(sum.data());
      for (int i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < nn; ++k) neg[k] = -x[static_cast<std::size_t>(i) * nn + k];
        e -= K.bodies[static_cast<std::size_t>(i + 1)].support(neg.data());
      }
      out[c] = std::exp(e + lin + log_norm);
    }
  });
}

Estimate polar_volume_mc(const BodyCollection& K, double q, long samples, std::uint64_t seed) {
  K.validate();
  check_q(K.n, q);
  check_origin(K);
  std::vector<double> rates;
  for (int i = 1; i <= K.m; ++i) rates.push_back(inradius(K.bodies[static_cast<std::size_t>(i)]));
  return polar_volume_mc_joint({K}, q, rates, samples, seed).estimate(0, seed);
}

Estimate ball_polar_volume(int n, int m, double q, long samples, std::uint64_t seed) {
  using Key = std::tuple<int, int, double, long, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, Estimate> cache;
  const Key key{n, m, q, samples, seed};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Estimate e = polar_volume_mc(BodyCollection::uniform(Body::ball(n), m), q, samples, seed);
  std::lock_guard lock(mutex);
  cache.emplace(key, e);
  return e;
}

Body centered(const Body& K) {
  if (K.is_ball()) return K;
  return Body::polytope(translate(K.poly(), negate(centroid(K.poly()))));
}

Estimate polar_schneider_ratio(const Body& K, int m, long samples, std::uint64_t seed) {
  const int n = K.dim();
  const Body Kc = centered(K);
  Estimate num = product(polar_volume_mc(BodyCollection::uniform(Kc, m), 0, samples, seed), std::pow(Kc.volume(), m));
  Estimate den = product(ball_polar_volume(n, m, 0, samples, seed), std::pow(ball_volume(n), m));
  return ratio(num, den);
}

CollectionVerdict collection_polar_schneider(const BodyCollection& K, double q, long samples, std::uint64_t seed) {
  K.validate();
  check_q(K.n, q);
  const int n = K.n, m = K.m;
  std::vector<Body> bodies;
  std::vector<double> polar_vol;
  for (const auto& b : K.bodies) {
    Body c = centered(b);
    polar_vol.push_back(c.is_ball() ? ball_volume(n) / std::pow(c.as_ball().radius.get_d(), n)
                                    : polar_volume_exact(c.poly()).get_d());
    bodies.push_back(std::move(c));
  }
  CollectionVerdict v;
  BodyCollection scaled{n, m, {}};
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const double t = std::pow(polar_vol[i] / polar_vol[0], 1.0 / n);
    v.scales.push_back(t);
    const Rational tr = from_double(t);
    if (bodies[i].is_ball()) scaled.bodies.push_back(Body::ball(n, bodies[i].as_ball().radius * tr));
    else scaled.bodies.push_back(Body::polytope(scale(bodies[i].poly(), tr)));
  }
  double vol_factor = 1;
  for (int i = 1; i <= m; ++i) vol_factor *= std::pow(scaled.bodies[static_cast<std::size_t>(i)].volume(), 1 - q / n);
  v.lhs = product(polar_volume_mc(scaled, q, samples, seed), vol_factor);
  v.rhs = product(ball_polar_volume(n, m, q, samples, seed + 1), std::pow(ball_volume(n), m * (1 - q / n)));
  v.holds = v.lhs.value - v.rhs.value <= 3 * std::hypot(v.lhs.std_error, v.rhs.std_error);
  return v;
}

Estimate dual_quermass(const Body& K, double q, long samples, std::uint64_t seed) {
  const int n = K.dim();
  check_q(n, q);
  const double a = n - q;
  const double factor = sphere_area(n) / n;
  if (K.is_ball()) {
    Estimate e;
    e.value = factor * std::pow(K.as_ball().radius.get_d(), a);
    e.samples = samples;
    e.seed = seed;
    return e;
  }
  if (!origin_interior(K.poly())) throw Error(ErrorKind::OriginNotInterior, "radial function needs the origin inside");
  const FloatHRep rep(facet_enum(K.poly()));
  const auto nn = static_cast<std::size_t>(n);
  Moments mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
    std::normal_distribution<double> gauss;
    std::vector<double> u(nn);
    double norm = 0;
    for (auto& c : u) {
      c = gauss(rng);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    double rho = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.size(); ++i) {
      double au = 0;
      for (std::size_t k = 0; k < nn; ++k) au += rep.normals[i * nn + k] * u[k] / norm;
      if (au > 0) rho = std::min(rho, rep.offsets[i] / au);
    }
    out[0] = std::pow(rho, a);
  });
  return product(mom.estimate(0, seed), factor);
}

GardnerVerdict gardner_check(const Body& K, double q, long samples, std::uint64_t seed) {
  const int n = K.dim();
  GardnerVerdict g;
  g.volume_side = std::pow(K.volume(), 1 - q / n);
  g.quermass_side = product(dual_quermass(K, q, samples, seed), std::pow(ball_volume(n), -q / n));
  g.holds = g.quermass_side.value <= g.volume_side + 3 * g.quermass_side.std_error;
  return g;
}

BourgainMilmanVerdict bourgain_milman_check(const Body& K, int m, long samples, std::uint64_t seed, int budget_dim) {
  const int n = K.dim();
  if (n < 3 || m < 2) throw Error(ErrorKind::DimensionMismatch, "the bound is stated for n >= 3 and m >= 2");
  BourgainMilmanVerdict v;
  const bool symmetric = K.is_ball() || is_origin_symmetric(centered(K).poly());
  v.c = symmetric ? 0.5 : 0.25;
  if (!K.is_ball() && n * m <= budget_dim) {
    v.s_body.value = schneider_functional(K.poly(), m, budget_dim).get_d();
    v.s_body.samples = 0;
  } else {
    v.s_body = schneider_functional_mc(K, m, samples, seed);
  }
  v.s_ball = schneider_functional_mc(Body::ball(n), m, samples, seed + 1);
  const double factor = std::pow(v.c, n * m) * std::numbers::pi * n * m;
  v.bound = factor * v.s_ball.value;
  v.holds = v.s_body.value >= v.bound - 3 * std::hypot(v.s_body.std_error, factor * v.s_ball.std_error);
  return v;
}

}  // namespace diffbody
