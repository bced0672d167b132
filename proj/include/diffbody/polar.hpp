#pragma once

#include "diffbody/mdiff.hpp"

namespace diffbody {

/// ⟨v, x⟩ ≤ 1 for every vertex v. Throws OriginNotInterior.
HPolytope polar_dual(const VPolytope& P);
/// conv{a / b}. Throws OriginNotInterior unless every offset is positive.
VPolytope polar_dual(const HPolytope& H);

bool origin_interior(const VPolytope& P);
/// Radius of the largest centered ball inside K.
double inradius(const Body& K);

/// vol(P°), exact.
Rational polar_volume_exact(const VPolytope& P);

double ball_volume(int n);
double sphere_area(int n);  // |S^{n-1}|

/// μ(D^{m,∘}(K)) for the measure with density Π|x_i|^{-q}, estimated through
///   Γ(1+m(n-q))^{-1} ∫ exp(-h_{K_0}(Σx_i) - Σ h_{K_i}(-x_i)) Π |x_i|^{-q} dx.
/// Each block is drawn from a uniform direction times a Gamma(n-q) radius
/// whose rate is the inradius of K_i, which keeps the weights bounded. q = 0
/// gives the volume of the polar. Throws OriginNotInterior, InvalidQ.
Estimate polar_volume_mc(const BodyCollection& K, double q, long samples, std::uint64_t seed);

/// Shared-proposal variant: one draw is evaluated against every collection,
/// so the returned channels are jointly distributed (common random numbers).
/// `rates` gives the Gamma rate per block.
Moments polar_volume_mc_joint(const std::vector<BodyCollection>& Ks, double q, const std::vector<double>& rates,
                              long samples, std::uint64_t seed);

/// μ(D^{m,∘}(B)) for the unit ball, memoized by (n, m, q, samples, seed).
Estimate ball_polar_volume(int n, int m, double q, long samples, std::uint64_t seed);

/// [vol(D^{m,∘}K) vol(K)^m] / [vol(D^{m,∘}B) vol(B)^m]. Polytopes are moved to
/// their centroid first.
Estimate polar_schneider_ratio(const Body& K, int m, long samples, std::uint64_t seed);

struct CollectionVerdict {
  Estimate lhs;          // μ(D^{m,∘}(K)) Π vol(K_i)^{1-q/n}
  Estimate rhs;          // vol(B)^{m(1-q/n)} μ(D^{m,∘}(B))
  bool holds = false;    // lhs ≤ rhs within 3σ
  std::vector<double> scales;  // dilation applied to each K_i
};

/// Centers every body, rescales K_i so that vol(K_i°) = vol(K_0°), then
/// compares both sides of the weighted collection inequality.
CollectionVerdict collection_polar_schneider(const BodyCollection& K, double q, long samples, std::uint64_t seed);

/// W̃_q(K) = |S^{n-1}|/n · E[ρ_K(u)^{n-q}] over uniform directions.
Estimate dual_quermass(const Body& K, double q, long samples, std::uint64_t seed);

struct GardnerVerdict {
  double volume_side = 0;  // vol(K)^{1-q/n}
  Estimate quermass_side;  // W̃_q(K) vol(B)^{-q/n}
  bool holds = false;
};
GardnerVerdict gardner_check(const Body& K, double q, long samples, std::uint64_t seed);

struct BourgainMilmanVerdict {
  Estimate s_body;   // exact value carries zero error
  Estimate s_ball;
  double c = 0;
  double bound = 0;  // c^{nm} π n m S_{n,m}(B)
  bool holds = false;
};
/// S_{n,m}(K) ≥ c^{nm}(πnm) S_{n,m}(B), c = 1/2 for symmetric K, 1/4 otherwise.
BourgainMilmanVerdict bourgain_milman_check(const Body& K, int m, long samples, std::uint64_t seed,
                                            int budget_dim = kDefaultBudgetDim);

/// Translate a polytope body to its exact centroid; balls are returned as is.
Body centered(const Body& K);

}  // namespace diffbody
