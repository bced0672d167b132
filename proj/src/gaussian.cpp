#include "diffbody/gaussian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "diffbody/error.hpp"
#include "diffbody/polar.hpp"

namespace diffbody {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat to_eigen(const DenseMatrix& a) {
  Mat m(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
  return m;
}

DenseMatrix from_eigen(const Mat& m) {
  DenseMatrix a(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) a(i, j) = m(i, j);
  return a;
}

void check_tuple(const std::vector<PDMatrix>& A) {
  if (A.size() < 2) throw Error(ErrorKind::EmptyInput, "need A_0 and at least one A_i");
  for (const auto& a : A)
    if (a.n() != A.front().n()) throw Error(ErrorKind::DimensionMismatch, "matrices of differing size");
}

double log_det_pd(const Mat& a) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::DegenerateInput, "matrix is not positive definite");
  const Mat& l = llt.matrixL();
  double s = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += 2 * std::log(l(i, i));
  return s;
}

Mat block_M(const std::vector<Mat>& A) {
  const auto n = A.front().rows();
  const auto m = static_cast<Eigen::Index>(A.size()) - 1;
  Mat M(n * m, n * m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      M.block(i * n, j * n, n, n) = A[0] + (i == j ? A[static_cast<std::size_t>(i + 1)] : Mat::Zero(n, n));
  return M;
}

std::vector<Mat> to_eigen(const std::vector<PDMatrix>& A) {
  std::vector<Mat> out;
  for (const auto& a : A) out.push_back(to_eigen(a.matrix()));
  return out;
}

// Cholesky factor of a covariance, for drawing N(0, C).
Mat cholesky(const Mat& c) {
  Eigen::LLT<Mat> llt(c);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::DegenerateInput, "covariance is not positive definite");
  return llt.matrixL();
}

// log f° at arbitrary points. Grid inputs keep (node, log f) pairs; 1-D grids
// keep only the upper concave hull so the max-scan becomes a binary search.
class PolarEval {
 public:
  explicit PolarEval(const FunctionInput& f) {
    if (const auto* g = std::get_if<GaussianSpec>(&f)) {
      gaussian_ = true;
      n_ = g->n();
      if (!(g->amplitude > 0)) throw Error(ErrorKind::DegenerateInput, "amplitude must be positive");
      inv_ = to_eigen(g->matrix.inverse().matrix());
      log_c_ = std::log(g->amplitude);
      return;
    }
    const auto& grid = std::get<GridFunction>(f);
    grid.validate();
    n_ = grid.n;
    const double h = grid.step();
    const int p = grid.points;
    for (std::size_t idx = 0; idx < grid.values.size(); ++idx) {
      const double v = grid.values[idx];
      if (!(v > 0)) continue;
      const int i = static_cast<int>(idx) / (n_ == 2 ? p : 1);
      const int j = static_cast<int>(idx) % p;
      if (n_ == 1) nodes_.push_back(-grid.half_width + j * h);
      else {
        nodes_.push_back(-grid.half_width + i * h);
        nodes_.push_back(-grid.half_width + j * h);
      }
      logs_.push_back(std::log(v));
    }
    if (logs_.empty()) throw Error(ErrorKind::NonIntegrable, "f vanishes on the grid");
    if (n_ == 1) upper_hull();
  }

  int n() const { return n_; }

  double log_value(const double* x) const {
    if (gaussian_) {
      double q = 0;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) q += x[i] * inv_(i, j) * x[j];
      return -log_c_ - q / 2;
    }
    return -conjugate(x);
  }

 private:
  // max over nodes of ⟨x, y⟩ + log f(y)
  double conjugate(const double* x) const {
    if (n_ == 1) {
      std::size_t lo = 0, hi = logs_.size() - 1;
      auto val = [&](std::size_t k) { return x[0] * nodes_[k] + logs_[k]; };
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (val(mid) < val(mid + 1)) lo = mid + 1;
        else hi = mid;
      }
      return val(lo);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < logs_.size(); ++k)
      best = std::max(best, x[0] * nodes_[2 * k] + x[1] * nodes_[2 * k + 1] + logs_[k]);
    return best;
  }

  void upper_hull() {
    std::vector<double> y, l;
    for (std::size_t k = 0; k < logs_.size(); ++k) {
      while (y.size() >= 2) {
        const std::size_t a = y.size() - 2, b = y.size() - 1;
        const double cross = (y[b] - y[a]) * (logs_[k] - l[a]) - (l[b] - l[a]) * (nodes_[k] - y[a]);
        if (cross >= 0) {
          y.pop_back();
          l.pop_back();
        } else {
          break;
        }
      }
      y.push_back(nodes_[k]);
      l.push_back(logs_[k]);
    }
    nodes_ = std::move(y);
    logs_ = std::move(l);
  }

  bool gaussian_ = false;
  int n_ = 0;
  Mat inv_;
  double log_c_ = 0;
  std::vector<double> nodes_, logs_;
};

// Per-axis scale at which f° has dropped by e^{-2}; NonIntegrable when no
// drop occurs out to 1e6.
std::vector<double> polar_scales(const PolarEval& f) {
  const int n = f.n();
  std::vector<double> zero(static_cast<std::size_t>(n), 0.0), x(zero);
  const double base = f.log_value(zero.data());
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    auto drop = [&](double r) {
      x = zero;
      x[static_cast<std::size_t>(k)] = r;
      const double a = f.log_value(x.data());
      x[static_cast<std::size_t>(k)] = -r;
      return base - std::max(a, f.log_value(x.data()));
    };
    double hi = 1e-3;
    while (drop(hi) < 2) {
      hi *= 2;
      if (hi > 1e6) throw Error(ErrorKind::NonIntegrable, "the polar function does not decay");
    }
    double lo = 0;
    for (int it = 0; it < 60; ++it) {
      const double mid = (lo + hi) / 2;
      (drop(mid) < 2 ? lo : hi) = mid;
    }
    out.push_back(hi / 2);
  }
  return out;
}

std::vector<double> trapezoid_weights(int points, double h) {
  std::vector<double> w(static_cast<std::size_t>(points), h);
  w.front() = w.back() = h / 2;
  return w;
}

Estimate polar_product_integral(const std::vector<FunctionInput>& f, long samples, std::uint64_t seed) {
  const int n = dimension(f.front());
  const int m = static_cast<int>(f.size()) - 1;
  const auto nn = static_cast<std::size_t>(n);
  const int d = n * m;
  std::vector<PolarEval> eval;
  for (const auto& fi : f) eval.emplace_back(fi);
  const bool all_gaussian =
      std::all_of(f.begin(), f.end(), [](const FunctionInput& fi) { return std::holds_alternative<GaussianSpec>(fi); });

  if (all_gaussian) {
    // Proposal N(0, τ·diag(A_1..A_m)); the integrand's precision dominates
    // diag(A_i^{-1}) ≥ its precision, so weights are bounded.
    constexpr double tau = 2;
    std::vector<Mat> chol;
    double log_q_norm = -0.5 * d * std::log(2 * std::numbers::pi * tau);
    for (int i = 1; i <= m; ++i) {
      const Mat a = to_eigen(std::get<GaussianSpec>(f[static_cast<std::size_t>(i)]).matrix.matrix());
      chol.push_back(cholesky(a));
      log_q_norm -= 0.5 * log_det_pd(a);
    }
    Moments mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
      std::normal_distribution<double> gauss;
      std::vector<double> x(nn), sum(nn, 0.0);
      Vec xi(n);
      double log_w = -log_q_norm;
      for (int i = 0; i < m; ++i) {
        double r2 = 0;
        for (int k = 0; k < n; ++k) {
          xi(k) = gauss(rng);
          r2 += xi(k) * xi(k);
        }
        const Vec y = std::sqrt(tau) * (chol[static_cast<std::size_t>(i)] * xi);
        for (std::size_t k = 0; k < nn; ++k) {
          x[k] = y(static_cast<Eigen::Index>(k));
          sum[k] -= x[k];
        }
        log_w += r2 / 2 + eval[static_cast<std::size_t>(i + 1)].log_value(x.data());
      }
      log_w += eval[0].log_value(sum.data());
      out[0] = std::exp(log_w);
    });
    return mom.estimate(0, seed);
  }

  // Multivariate Student-t proposal, ν = 5, with per-coordinate scales.
  constexpr double nu = 5;
  std::vector<double> s;
  for (int i = 1; i <= m; ++i)
    for (double v : polar_scales(eval[static_cast<std::size_t>(i)])) s.push_back(v);
  double log_q_norm = std::lgamma((nu + d) / 2) - std::lgamma(nu / 2) - 0.5 * d * std::log(nu * std::numbers::pi);
  for (double v : s) log_q_norm -= std::log(v);
  Moments mom = monte_carlo(samples, seed, 1, [&](Rng& rng, double* out) {
    std::normal_distribution<double> gauss;
    std::chi_squared_distribution<double> chi(nu);
    const double scale = std::sqrt(nu / chi(rng));
    std::vector<double> x(nn), sum(nn, 0.0);
    double r2 = 0, log_g = 0;
    for (int i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < nn; ++k) {
        const double xi = gauss(rng) * scale;
        r2 += xi * xi;
        x[k] = xi * s[static_cast<std::size_t>(i) * nn + k];
        sum[k] -= x[k];
      }
      log_g += eval[static_cast<std::size_t>(i + 1)].log_value(x.data());
    }
    log_g += eval[0].log_value(sum.data());
    const double log_q = log_q_norm - (nu + d) / 2 * std::log1p(r2 / nu);
    out[0] = std::exp(log_g - log_q);
  });
  return mom.estimate(0, seed);
}

void check_even(const TestFunction& psi, int n) {
  Rng rng = stream_rng(0x5eed, 0);
  std::normal_distribution<double> gauss;
  std::vector<double> x(static_cast<std::size_t>(n)), y(x);
  for (int t = 0; t < 64; ++t) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = 2 * gauss(rng);
      y[k] = -x[k];
    }
    const double a = psi.value(x.data(), n), b = psi.value(y.data(), n);
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) throw Error(ErrorKind::NotEven, psi.name + " is not even");
  }
}

void psi_gradient(const TestFunction& psi, int n, const double* x, double* out, bool fd) {
  if (!fd && psi.gradient) {
    psi.gradient(x, n, out);
    return;
  }
  constexpr double h = 1e-5;
  std::vector<double> y(x, x + n);
  for (int k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    y[kk] = x[k] + h;
    const double up = psi.value(y.data(), n);
    y[kk] = x[k] - h;
    const double down = psi.value(y.data(), n);
    y[kk] = x[k];
    out[k] = (up - down) / (2 * h);
  }
}

}  // namespace

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "empty matrix");
  DenseMatrix a(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < a.rows; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != a.cols)
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (int j = 0; j < a.cols; ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return a;
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1;
  return a;
}

std::vector<std::vector<double>> DenseMatrix::to_rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out[static_cast<std::size_t>(i)].push_back((*this)(i, j));
  return out;
}

PDMatrix::PDMatrix(DenseMatrix a) : a_(std::move(a)) {
  if (a_.rows != a_.cols || a_.rows == 0) throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
  double scale = 0;
  for (double v : a_.data) {
    if (!std::isfinite(v)) throw Error(ErrorKind::DegenerateInput, "non-finite matrix entry");
    scale = std::max(scale, std::abs(v));
  }
  for (int i = 0; i < a_.rows; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(a_(i, j) - a_(j, i)) > 1e-12 * scale) throw Error(ErrorKind::DegenerateInput, "matrix is not symmetric");
  log_det_pd(to_eigen(a_));
}

PDMatrix PDMatrix::identity(int n) { return PDMatrix(DenseMatrix::identity(n)); }

PDMatrix PDMatrix::random(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = gauss(rng);
  Mat a = b * b.transpose() / n + 0.2 * Mat::Identity(n, n);
  a = (a + a.transpose()) / 2;
  return PDMatrix(from_eigen(a));
}

PDMatrix PDMatrix::inverse() const {
  Mat inv = Eigen::LLT<Mat>(to_eigen(a_)).solve(Mat::Identity(n(), n()));
  inv = (inv + inv.transpose()) / 2;
  return PDMatrix(from_eigen(inv));
}

double PDMatrix::determinant() const { return std::exp(log_det_pd(to_eigen(a_))); }

DenseMatrix block_matrix_M(const std::vector<PDMatrix>& A) {
  check_tuple(A);
  return from_eigen(block_M(to_eigen(A)));
}

DetIdentityResult det_identity_check(const std::vector<PDMatrix>& A) {
  check_tuple(A);
  const std::vector<Mat> E = to_eigen(A);
  const Mat M = block_M(E);
  Eigen::SelfAdjointEigenSolver<Mat> eig(M, Eigen::EigenvaluesOnly);
  const double cond = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  if (!(cond <= 1e12)) throw Error(ErrorKind::IllConditioned, "cond(M) exceeds 1e12");
  DetIdentityResult r;
  r.direct = Eigen::FullPivLU<Mat>(M).determinant();
  Mat inv_sum = Mat::Zero(E[0].rows(), E[0].cols());
  double log_prod = 0;
  for (const auto& a : E) {
    log_prod += log_det_pd(a);
    inv_sum += Eigen::LLT<Mat>(a).solve(Mat::Identity(a.rows(), a.cols()));
  }
  r.identity = std::exp(log_prod + log_det_pd(inv_sum));
  r.relative_error = std::abs(r.direct - r.identity) / std::abs(r.identity);
  r.holds = r.relative_error <= 1e-9;
  return r;
}

double f_objective(const std::vector<PDMatrix>& A) {
  check_tuple(A);
  const std::vector<Mat> E = to_eigen(A);
  const double m = static_cast<double>(A.size()) - 1;
  double log_f = -0.5 * log_det_pd(block_M(E));
  for (const auto& a : E) log_f += m / (2 * (m + 1)) * log_det_pd(a);
  return std::exp(log_f);
}

double f_bound(int n, int m) { return std::pow(m + 1.0, -n / 2.0); }

FBoundReport f_bound_probe(int n, int m, long trials, std::uint64_t seed) {
  FBoundReport r;
  const double bound = f_bound(n, m);
  for (long t = 0; t < trials; ++t) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(t));
    std::vector<PDMatrix> A;
    for (int i = 0; i <= m; ++i) A.push_back(PDMatrix::random(n, rng));
    const double ratio = f_objective(A) / bound;
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > 1 + 1e-9) ++r.violations;

    std::vector<PDMatrix> equal(static_cast<std::size_t>(m + 1), A[0]);
    r.equal_max_error = std::max(r.equal_max_error, std::abs(f_objective(equal) / bound - 1));
    DenseMatrix shifted = A[0].matrix();
    for (int i = 0; i < n; ++i) shifted(i, i) += 0.1;
    equal[0] = PDMatrix(shifted);
    r.perturbed_max_ratio = std::max(r.perturbed_max_ratio, f_objective(equal) / bound);
    ++r.trials;
  }
  r.holds = r.violations == 0 && r.equal_max_error <= 1e-9 && r.perturbed_max_ratio < 1;
  return r;
}

double schneider_constant(int n, int m) {
  const double pi = std::numbers::pi;
  const double e = n * m / 2.0;
  return std::pow(2 * pi * m / (m + 1.0), e) * std::pow(2 * pi / std::pow(m + 1.0, 1.0 / m), e);
}

double schneider_constant_via_optimum(int n, int m) {
  const double pi = std::numbers::pi;
  return std::pow(4 * pi * pi * m / (m + 1.0), n * m / 2.0) * f_bound(n, m);
}

double GaussianSpec::operator()(const double* x) const {
  double q = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j) q += x[i] * matrix(i, j) * x[j];
  return amplitude * std::exp(-q / 2);
}

void GridFunction::validate() const {
  if (n != 1 && n != 2) throw Error(ErrorKind::ConfigInvalid, "grid functions support n = 1 or 2");
  if (points < 3 || points > 256) throw Error(ErrorKind::ConfigInvalid, "grid needs 3..256 points per axis");
  if (!(half_width > 0)) throw Error(ErrorKind::ConfigInvalid, "grid half-width must be positive");
  const std::size_t total = n == 1 ? static_cast<std::size_t>(points) : static_cast<std::size_t>(points * points);
  if (values.size() != total) throw Error(ErrorKind::ConfigInvalid, "grid value count does not match its shape");
  double top = 0;
  for (double v : values) {
    if (!(v >= 0) || !std::isfinite(v)) throw Error(ErrorKind::ConfigInvalid, "grid values must be finite and >= 0");
    top = std::max(top, v);
  }
  for (std::size_t k = 0; k < total; ++k)
    if (std::abs(values[k] - values[total - 1 - k]) > 1e-12 * top) throw Error(ErrorKind::NotEven, "grid function is not even");
}

GridFunction GridFunction::sample(int n, int points, double half_width, const std::function<double(const double*)>& fn) {
  GridFunction g{n, points, half_width, {}};
  const double h = g.step();
  double x[2];
  if (n == 1) {
    for (int j = 0; j < points; ++j) {
      x[0] = -half_width + j * h;
      g.values.push_back(fn(x));
    }
  } else {
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < points; ++j) {
        x[0] = -half_width + i * h;
        x[1] = -half_width + j * h;
        g.values.push_back(fn(x));
      }
  }
  g.validate();
  return g;
}

int dimension(const FunctionInput& f) {
  if (const auto* g = std::get_if<GaussianSpec>(&f)) return g->n();
  return std::get<GridFunction>(f).n;
}

double integral_power(const FunctionInput& f, double p) {
  if (const auto* g = std::get_if<GaussianSpec>(&f)) {
    const int n = g->n();
    return std::pow(g->amplitude, p) * std::pow(2 * std::numbers::pi / p, n / 2.0) / std::sqrt(g->matrix.determinant());
  }
  const auto& grid = std::get<GridFunction>(f);
  grid.validate();
  const auto w = trapezoid_weights(grid.points, grid.step());
  const auto pts = static_cast<std::size_t>(grid.points);
  double s = 0;
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    const double wk = grid.n == 1 ? w[k] : w[k / pts] * w[k % pts];
    s += wk * std::pow(grid.values[k], p);
  }
  return s;
}

double polar_value(const FunctionInput& f, const double* x) { return std::exp(PolarEval(f).log_value(x)); }

FunctionalLhs functional_lhs_mc(const std::vector<FunctionInput>& f, long samples, std::uint64_t seed) {
  if (f.size() < 2) throw Error(ErrorKind::EmptyInput, "need f_0 and at least one f_i");
  const int n = dimension(f.front());
  for (const auto& fi : f)
    if (dimension(fi) != n) throw Error(ErrorKind::DimensionMismatch, "functions of differing dimension");
  const int m = static_cast<int>(f.size()) - 1;
  FunctionalLhs r;
  r.constant = schneider_constant(n, m);
  const double p = (m + 1.0) / m;
  r.norm_factor = 1;
  for (const auto& fi : f) r.norm_factor *= std::pow(integral_power(fi, p), 1 / p);
  r.integral = polar_product_integral(f, samples, seed);
  r.lhs = product(r.integral, r.norm_factor);
  return r;
}

M1Forms m1_forms_check(const FunctionInput& f0, const FunctionInput& f1, long samples, std::uint64_t seed) {
  const int n = dimension(f0);
  if (dimension(f1) != n) throw Error(ErrorKind::DimensionMismatch, "functions of differing dimension");
  double cross = 0;
  const auto* g0 = std::get_if<GaussianSpec>(&f0);
  const auto* g1 = std::get_if<GaussianSpec>(&f1);
  const auto* q0 = std::get_if<GridFunction>(&f0);
  const auto* q1 = std::get_if<GridFunction>(&f1);
  if (g0 && g1) {
    const Mat sum = to_eigen(g0->matrix.matrix()) + to_eigen(g1->matrix.matrix());
    cross = g0->amplitude * g1->amplitude * std::pow(2 * std::numbers::pi, n / 2.0) * std::exp(-0.5 * log_det_pd(sum));
  } else if (q0 && q1 && q0->points == q1->points && q0->half_width == q1->half_width) {
    GridFunction prod = *q0;
    for (std::size_t k = 0; k < prod.values.size(); ++k) prod.values[k] *= q1->values[k];
    cross = integral_power(prod, 1);
  } else {
    throw Error(ErrorKind::ConfigInvalid, "f_0 and f_1 must both be Gaussian or share one grid");
  }
  const FunctionalLhs lhs = functional_lhs_mc({f0, f1}, samples, seed);
  M1Forms r;
  r.bound = std::pow(std::numbers::pi, n);
  r.sharp = lhs.lhs;
  r.product = product(lhs.integral, cross);
  r.holds = r.sharp.value <= r.bound + 3 * r.sharp.std_error && r.product.value <= r.bound + 3 * r.product.std_error;
  return r;
}

EllipsoidCheck ellipsoid_dual_l2_check(const std::vector<PDMatrix>& B) {
  check_tuple(B);
  const int n = B.front().n();
  const int m = static_cast<int>(B.size()) - 1;
  std::vector<Mat> inv;
  double log_lhs = 0;
  for (const auto& b : B) {
    const Mat e = to_eigen(b.matrix());
    log_lhs += m / (m + 1.0) * (std::log(ball_volume(n)) - 0.5 * log_det_pd(e));
    inv.push_back(Eigen::LLT<Mat>(e).solve(Mat::Identity(n, n)));
  }
  log_lhs += std::log(ball_volume(n * m)) - 0.5 * log_det_pd(block_M(inv));
  EllipsoidCheck r;
  r.lhs = std::exp(log_lhs);
  r.rhs = std::pow(ball_volume(n), m) * ball_volume(n * m) * f_bound(n, m);
  r.holds = r.lhs <= r.rhs * (1 + 1e-9);
  return r;
}

InclusionSpotCheck dual_sum_inclusion_check(const BodyCollection& K, long points, std::uint64_t seed) {
  K.validate();
  const int n = K.n, m = K.m;
  const auto nn = static_cast<std::size_t>(n);
  Rng rng = stream_rng(seed, 0);
  std::normal_distribution<double> gauss;
  InclusionSpotCheck r;
  std::vector<double> sum(nn), neg(nn);
  for (long t = 0; t < points; ++t) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::vector<double> h(static_cast<std::size_t>(m + 1));
    std::vector<std::vector<double>> x(static_cast<std::size_t>(m), std::vector<double>(nn));
    for (auto& xi : x)
      for (std::size_t k = 0; k < nn; ++k) {
        xi[k] = gauss(rng);
        sum[k] += xi[k];
      }
    h[0] = K.bodies[0].support(sum.data());
    for (int i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < nn; ++k) neg[k] = -x[static_cast<std::size_t>(i)][k];
      h[static_cast<std::size_t>(i + 1)] = K.bodies[static_cast<std::size_t>(i + 1)].support(neg.data());
    }
    double l1 = 0, l2 = 0;
    for (double v : h) {
      l1 += v;
      l2 += v * v;
    }
    r.max_ratio = std::max(r.max_ratio, l1 / (std::sqrt(m + 1.0) * std::sqrt(l2)));
    ++r.tested;
  }
  r.holds = r.max_ratio <= 1 + 1e-12;
  return r;
}

DenseMatrix schneider_gaussian_covariance(int n, int m) {
  if (n < 1 || m < 1) throw Error(ErrorKind::DimensionMismatch, "need n, m >= 1");
  DenseMatrix c(n * m, n * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k) c(i * n + k, j * n + k) = (i == j ? 1.0 : 0.0) - 1.0 / (m + 1);
  return c;
}

std::vector<std::vector<double>> sample_schneider_gaussian(int n, int m, long count, std::uint64_t seed) {
  const Mat L = cholesky(to_eigen(schneider_gaussian_covariance(n, m)));
  const int d = n * m;
  Rng rng = stream_rng(seed, 0);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  Vec xi(d);
  for (long t = 0; t < count; ++t) {
    for (int k = 0; k < d; ++k) xi(k) = gauss(rng);
    const Vec z = L * xi;
    out.emplace_back(z.data(), z.data() + d);
  }
  return out;
}

double schneider_gaussian_normalizer(int n, int m) {
  const std::vector<PDMatrix> id(static_cast<std::size_t>(m + 1), PDMatrix::identity(n));
  const Mat M = to_eigen(block_matrix_M(id));
  return std::exp(0.5 * log_det_pd(M) - 0.5 * n * m * std::log(2 * std::numbers::pi));
}

TestFunction test_constant(double c) {
  return {"constant", [c](const double*, int) { return c; },
          [](const double*, int n, double* g) { std::fill(g, g + n, 0.0); }};
}

TestFunction test_squared_norm() {
  return {"squared_norm",
          [](const double* x, int n) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += x[k] * x[k];
            return s;
          },
          [](const double* x, int n, double* g) {
            for (int k = 0; k < n; ++k) g[k] = 2 * x[k];
          }};
}

TestFunction test_cosine(std::vector<double> u) {
  auto dot = [u](const double* x, int n) {
    if (static_cast<int>(u.size()) != n) throw Error(ErrorKind::DimensionMismatch, "frequency has the wrong dimension");
    double s = 0;
    for (int k = 0; k < n; ++k) s += u[static_cast<std::size_t>(k)] * x[k];
    return s;
  };
  return {"cosine", [dot](const double* x, int n) { return std::cos(dot(x, n)); },
          [dot, u](const double* x, int n, double* g) {
            const double s = -std::sin(dot(x, n));
            for (int k = 0; k < n; ++k) g[k] = s * u[static_cast<std::size_t>(k)];
          }};
}

double dm_value(const TestFunction& psi, int n, int m, const double* x) {
  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  double v = 0;
  for (int i = 0; i < m; ++i) {
    v += psi.value(x + i * n, n);
    for (int k = 0; k < n; ++k) sum[static_cast<std::size_t>(k)] -= x[i * n + k];
  }
  return v + psi.value(sum.data(), n);
}

void dm_gradient(const TestFunction& psi, int n, int m, const double* x, double* out, bool finite_difference) {
  if (finite_difference || !psi.gradient) {
    constexpr double h = 1e-5;
    std::vector<double> y(x, x + n * m);
    for (std::size_t k = 0; k < y.size(); ++k) {
      y[k] = x[k] + h;
      const double up = dm_value(psi, n, m, y.data());
      y[k] = x[k] - h;
      const double down = dm_value(psi, n, m, y.data());
      y[k] = x[k];
      out[k] = (up - down) / (2 * h);
    }
    return;
  }
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> sum(nn, 0.0), g0(nn);
  for (int i = 0; i < m; ++i)
    for (std::size_t k = 0; k < nn; ++k) sum[k] -= x[static_cast<std::size_t>(i) * nn + k];
  psi.gradient(sum.data(), n, g0.data());
  for (int i = 0; i < m; ++i) {
    double* gi = out + static_cast<std::size_t>(i) * nn;
    psi.gradient(x + static_cast<std::size_t>(i) * nn, n, gi);
    for (std::size_t k = 0; k < nn; ++k) gi[k] -= g0[k];
  }
}

double gradient_check(const TestFunction& psi, int n, int m, int points, std::uint64_t seed) {
  Rng rng = stream_rng(seed, 0);
  std::normal_distribution<double> gauss;
  const auto d = static_cast<std::size_t>(n * m);
  std::vector<double> x(d), ga(d), gf(d);
  double worst = 0;
  for (int t = 0; t < points; ++t) {
    for (auto& v : x) v = gauss(rng);
    dm_gradient(psi, n, m, x.data(), ga.data(), false);
    dm_gradient(psi, n, m, x.data(), gf.data(), true);
    for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(ga[k] - gf[k]) / std::max(1.0, std::abs(ga[k])));
  }
  return worst;
}

PoincareReport poincare_probe(const TestFunction& psi, int n, int m, long samples, std::uint64_t seed,
                              bool finite_difference) {
  if (n < 1 || m < 1) throw Error(ErrorKind::DimensionMismatch, "need n, m >= 1");
  check_even(psi, n);
  const double sigma = m / (m + 1.0);
  const auto nn = static_cast<std::size_t>(n);
  const int d = n * m;

  // ψ, ψ², |∇ψ|² under N(0, σI)
  Moments one = monte_carlo(samples, seed, 3, [&](Rng& rng, double* out) {
    std::normal_distribution<double> gauss(0, std::sqrt(sigma));
    std::vector<double> x(nn), g(nn);
    for (auto& v : x) v = gauss(rng);
    const double p = psi.value(x.data(), n);
    psi_gradient(psi, n, x.data(), g.data(), finite_difference);
    double g2 = 0;
    for (double v : g) g2 += v * v;
    out[0] = p;
    out[1] = p * p;
    out[2] = g2;
  });

  // D^mψ, (D^mψ)², |∇D^mψ|² under N(0, M^{-1})
  const Mat L = cholesky(to_eigen(schneider_gaussian_covariance(n, m)));
  Moments two = monte_carlo(samples, seed + 1, 3, [&](Rng& rng, double* out) {
    std::normal_distribution<double> gauss;
    Vec xi(d);
    for (int k = 0; k < d; ++k) xi(k) = gauss(rng);
    const Vec z = L * xi;
    std::vector<double> g(static_cast<std::size_t>(d));
    const double v = dm_value(psi, n, m, z.data());
    dm_gradient(psi, n, m, z.data(), g.data(), finite_difference);
    double g2 = 0;
    for (double c : g) g2 += c * c;
    out[0] = v;
    out[1] = v * v;
    out[2] = g2;
  });

  // Delta-method error of Σ_j c_j·mean_j for a linearization c.
  auto spread = [](const Moments& mo, const double (&c)[3]) {
    double v = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v += c[i] * c[j] * mo.mean_cov(i, j);
    return std::sqrt(std::max(v, 0.0));
  };
  auto make = [&](double value, double error, long count) {
    Estimate e;
    e.value = value;
    e.std_error = error;
    e.samples = count;
    e.seed = seed;
    return e;
  };

  const double a = (m + 1.0) / m, b = 1.0 / (m + 1);
  const double mu1 = one.mean(0), mu2 = two.mean(0);
  PoincareReport r;
  const double c_var1[3] = {-2 * a * mu1, a, 0}, c_grad1[3] = {0, 0, 0.5};
  const double c_var2[3] = {-2 * b * mu2, b, 0}, c_grad2[3] = {0, 0, 0.5 * b};
  r.var_psi = make(a * (one.mean(1) - mu1 * mu1), spread(one, c_var1), samples);
  r.grad_psi = make(0.5 * one.mean(2), spread(one, c_grad1), samples);
  r.var_dm = make(b * (two.mean(1) - mu2 * mu2), spread(two, c_var2), samples);
  r.grad_dm = make(0.5 * b * two.mean(2), spread(two, c_grad2), samples);
  r.lhs = r.var_psi.value + r.var_dm.value;
  r.rhs = r.grad_psi.value + r.grad_dm.value;
  r.slack = r.rhs - r.lhs;
  const double s1[3] = {2 * a * mu1, -a, 0.5}, s2[3] = {2 * b * mu2, -b, 0.5 * b};
  r.slack_error = std::hypot(spread(one, s1), spread(two, s2));
  r.holds = r.slack >= -3 * r.slack_error;
  return r;
}

}  // namespace diffbody
