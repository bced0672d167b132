#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "diffbody/kernel.hpp"

namespace diffbody {

struct Estimate {
  double value = 0;
  double std_error = 0;
  long samples = 0;
  std::uint64_t seed = 0;

  /// |value - target| ≤ k·std_error
  bool agrees_with(double target, double k = 3.0) const;
};

/// a / b with first-order error propagation for independent estimates.
Estimate ratio(const Estimate& a, const Estimate& b);
Estimate product(const Estimate& a, double factor);

/// Running sums of several per-sample channels plus their cross products,
/// enough to form means and the covariance of those means.
class Moments {
 public:
  explicit Moments(int channels = 1);
  void add(const double* x);
  void merge(const Moments& other);

  int channels() const { return k_; }
  long count() const { return n_; }
  double mean(int i) const;
  /// Covariance of the sample means of channels i and j.
  double mean_cov(int i, int j) const;
  Estimate estimate(int i, std::uint64_t seed) const;

 private:
  int k_;
  long n_ = 0;
  std::vector<double> sum_, cross_;
};

/// Draws `samples` independent samples of `channels` values each. The work is
/// cut into fixed-size chunks, chunk c gets its own generator seeded from
/// (seed, c), and chunks merge in index order, so the result depends only on
/// the seed and never on the worker count. Workers come from the
/// DIFFBODY_WORKERS environment variable or the hardware concurrency.
using SampleFn = std::function<void(Rng&, double* out)>;
Moments monte_carlo(long samples, std::uint64_t seed, int channels, const SampleFn& draw);

/// Seeded generator for the c-th independent stream of `seed`.
Rng stream_rng(std::uint64_t seed, std::uint64_t stream);

int worker_count();
constexpr long kChunkSize = 4096;

}  // namespace diffbody
