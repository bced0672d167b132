#include "diffbody/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include "diffbody/error.hpp"

namespace diffbody {

bool Estimate::agrees_with(double target, double k) const { return std::abs(value - target) <= k * std_error; }

Estimate ratio(const Estimate& a, const Estimate& b) {
  Estimate r;
  r.value = a.value / b.value;
  const double ra = a.value != 0 ? a.std_error / a.value : 0;
  const double rb = b.std_error / b.value;
  r.std_error = std::abs(r.value) * std::sqrt(ra * ra + rb * rb);
  r.samples = std::min(a.samples, b.samples);
  r.seed = a.seed;
  return r;
}

Estimate product(const Estimate& a, double factor) {
  Estimate r = a;
  r.value *= factor;
  r.std_error *= std::abs(factor);
  return r;
}

Moments::Moments(int channels)
    : k_(channels), sum_(static_cast<std::size_t>(channels)), cross_(static_cast<std::size_t>(channels * channels)) {}

void Moments::add(const double* x) {
  ++n_;
  for (int i = 0; i < k_; ++i) {
    sum_[static_cast<std::size_t>(i)] += x[i];
    for (int j = 0; j < k_; ++j) cross_[static_cast<std::size_t>(i * k_ + j)] += x[i] * x[j];
  }
}

void Moments::merge(const Moments& o) {
  n_ += o.n_;
  for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += o.sum_[i];
  for (std::size_t i = 0; i < cross_.size(); ++i) cross_[i] += o.cross_[i];
}

double Moments::mean(int i) const { return sum_[static_cast<std::size_t>(i)] / static_cast<double>(n_); }

double Moments::mean_cov(int i, int j) const {
  if (n_ < 2) return 0;
  const double n = static_cast<double>(n_);
  const double c = (cross_[static_cast<std::size_t>(i * k_ + j)] - n * mean(i) * mean(j)) / (n - 1);
  return c / n;
}

Estimate Moments::estimate(int i, std::uint64_t seed) const {
  Estimate e;
  e.value = mean(i);
  e.std_error = std::sqrt(std::max(0.0, mean_cov(i, i)));
  e.samples = n_;
  e.seed = seed;
  return e;
}

Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

int worker_count() {
  if (const char* env = std::getenv("DIFFBODY_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::ConfigInvalid, std::string("DIFFBODY_WORKERS must be a positive integer, got '") + env + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Moments monte_carlo(long samples, std::uint64_t seed, int channels, const SampleFn& draw) {
  if (samples < 2) throw Error(ErrorKind::ConfigInvalid, "Monte Carlo needs at least 2 samples");
  const long chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<Moments> parts(static_cast<std::size_t>(chunks), Moments(channels));
  auto run_chunk = [&](long c) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(c));
    const long begin = c * kChunkSize, end = std::min(samples, begin + kChunkSize);
    std::vector<double> buf(static_cast<std::size_t>(channels));
    Moments& m = parts[static_cast<std::size_t>(c)];
    for (long s = begin; s < end; ++s) {
      draw(rng, buf.data());
      m.add(buf.data());
    }
  };
  const int workers = static_cast<int>(std::min<long>(worker_count(), chunks));
  if (workers <= 1) {
    for (long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        try {
          for (long c; (c = next++) < chunks;) run_chunk(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  Moments total(channels);
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace diffbody
