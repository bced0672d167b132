#pragma once

#include <functional>
#include <string>
#include <variant>

#include "diffbody/mdiff.hpp"

namespace diffbody {

/// Row-major dense float matrix.
struct DenseMatrix {
  int rows = 0, cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), 0.0) {}
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix identity(int n);

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i * cols + j)]; }
  std::vector<std::vector<double>> to_rows() const;
};

/// Symmetric positive-definite matrix. Construction checks symmetry to 1e-12
/// (relative to the largest entry) and runs a Cholesky factorization; either
/// failure throws DegenerateInput.
class PDMatrix {
 public:
  explicit PDMatrix(DenseMatrix a);
  static PDMatrix identity(int n);
  /// B Bᵀ/n + I/5 with standard normal B.
  static PDMatrix random(int n, Rng& rng);

  int n() const { return a_.rows; }
  const DenseMatrix& matrix() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }
  PDMatrix inverse() const;
  double determinant() const;
  bool operator==(const PDMatrix& o) const { return a_.data == o.a_.data; }

 private:
  DenseMatrix a_;
};

/// Block (i, j) is A_0 + δ_ij A_i for i, j = 1..m.
DenseMatrix block_matrix_M(const std::vector<PDMatrix>& A);

/// det M against Π det A_i · det Σ A_i^{-1}.
struct DetIdentityResult {
  double direct = 0;
  double identity = 0;
  double relative_error = 0;
  bool holds = false;  // relative error ≤ 1e-9
};
/// Throws IllConditioned when cond(M) > 1e12.
DetIdentityResult det_identity_check(const std::vector<PDMatrix>& A);

/// F_n = Π det(A_i)^{m/(2(m+1))} det(M)^{-1/2}.
double f_objective(const std::vector<PDMatrix>& A);
/// (m+1)^{-n/2}
double f_bound(int n, int m);

struct FBoundReport {
  long trials = 0;
  long violations = 0;           // F_n > bound·(1 + 1e-9)
  double max_ratio = 0;          // max F_n / bound over random tuples
  double equal_max_error = 0;    // max |F_n/bound - 1| at equal tuples
  double perturbed_max_ratio = 0;  // A_0 = A + I/10, the rest A
  bool holds = false;
};
FBoundReport f_bound_probe(int n, int m, long trials, std::uint64_t seed);

/// (2πm/(m+1))^{nm/2} (2π/(m+1)^{1/m})^{nm/2}
double schneider_constant(int n, int m);
/// (4π²m/(m+1))^{nm/2} times sup F_n = (m+1)^{-n/2}.
double schneider_constant_via_optimum(int n, int m);

/// f(x) = c·exp(-⟨Ax, x⟩/2).
struct GaussianSpec {
  double amplitude = 1;
  PDMatrix matrix = PDMatrix::identity(1);
  int n() const { return matrix.n(); }
  double operator()(const double* x) const;
};

/// Values of f ≥ 0 on the product grid {-w + k·2w/(points-1)}^n, n ≤ 2,
/// row-major with the last coordinate fastest.
struct GridFunction {
  int n = 1;
  int points = 0;
  double half_width = 1;
  std::vector<double> values;

  /// Throws ConfigInvalid on shape errors and NotEven unless f(-x) = f(x).
  void validate() const;
  double step() const { return 2 * half_width / (points - 1); }
  /// Samples `fn` on the grid.
  static GridFunction sample(int n, int points, double half_width, const std::function<double(const double*)>& fn);
};

using FunctionInput = std::variant<GaussianSpec, GridFunction>;

int dimension(const FunctionInput& f);
/// ∫ f^p: closed form for Gaussians, product trapezoid rule on grids.
double integral_power(const FunctionInput& f, double p);
/// f°(x) = inf_y e^{-⟨x,y⟩}/f(y). Gaussians map to (1/c)e^{-⟨A^{-1}x,x⟩/2};
/// grids use a direct max-scan over nodes with f > 0.
double polar_value(const FunctionInput& f, const double* x);

struct FunctionalLhs {
  double norm_factor = 0;  // Π (∫ f_i^{(m+1)/m})^{m/(m+1)}
  Estimate integral;       // ∫ Π f_i°(x_i) f_0°(-Σx_i) dx
  Estimate lhs;
  double constant = 0;     // C(n, m)
};
/// m = f.size() - 1. All-Gaussian inputs use a Gaussian proposal whose
/// precision is dominated by the integrand's, so the weights are bounded;
/// grid inputs use a Student-t proposal because their polars may only decay
/// exponentially. Throws NotEven, NonIntegrable, DimensionMismatch.
FunctionalLhs functional_lhs_mc(const std::vector<FunctionInput>& f, long samples, std::uint64_t seed);

struct M1Forms {
  Estimate sharp;     // (∫f_0²)^{1/2} (∫f_1²)^{1/2} ∫ f_1°(x) f_0°(-x) dx
  Estimate product;   // (∫ f_0 f_1) ∫ f_1°(x) f_0°(-x) dx
  double bound = 0;   // π^n
  bool holds = false;
};
/// Both m = 1 forms. ∫ f_0 f_1 is closed-form for two Gaussians and a grid
/// sum when both inputs share one grid; other mixes throw ConfigInvalid.
M1Forms m1_forms_check(const FunctionInput& f0, const FunctionInput& f1, long samples, std::uint64_t seed);

/// Ellipsoids K_i = {x : ⟨B_i x, x⟩ ≤ 1}. D_2^{m,∘} is then the ellipsoid
/// with precision M(B_0^{-1}, ..., B_m^{-1}), so both sides are closed-form.
struct EllipsoidCheck {
  double lhs = 0;  // Π vol(K_i)^{m/(m+1)} vol(D_2^{m,∘})
  double rhs = 0;  // vol(B^n)^m vol(B^{nm}) (m+1)^{-n/2}
  bool holds = false;
};
EllipsoidCheck ellipsoid_dual_l2_check(const std::vector<PDMatrix>& B);

/// Spot check of (m+1)^{-1/2} D_2^{m,∘} ⊆ D^{m,∘}: at random z,
/// ‖z‖_{D^{m,∘}} ≤ √(m+1) ‖z‖_{D_2^{m,∘}}.
struct InclusionSpotCheck {
  long tested = 0;
  double max_ratio = 0;  // ‖z‖_{D^{m,∘}} / (√(m+1) ‖z‖_{D_2^{m,∘}})
  bool holds = false;
};
InclusionSpotCheck dual_sum_inclusion_check(const BodyCollection& K, long points, std::uint64_t seed);

/// M^{-1} = I - (J ⊗ I_n)/(m+1) for the all-identity tuple.
DenseMatrix schneider_gaussian_covariance(int n, int m);
/// Exact multivariate normal draws with covariance M^{-1}.
std::vector<std::vector<double>> sample_schneider_gaussian(int n, int m, long count, std::uint64_t seed);
/// (det M)^{1/2} / (2π)^{nm/2} computed from the assembled M.
double schneider_gaussian_normalizer(int n, int m);

struct TestFunction {
  std::string name;
  std::function<double(const double*, int)> value;
  std::function<void(const double*, int, double*)> gradient;  // may be empty
};
TestFunction test_constant(double c);
TestFunction test_squared_norm();
TestFunction test_cosine(std::vector<double> u);  // cos⟨u, x⟩

/// D^mψ(x_1..x_m) = Σ ψ(x_i) + ψ(-Σ x_i) and its gradient
/// {∇ψ(x_i) - ∇ψ(-Σx)}.
double dm_value(const TestFunction& psi, int n, int m, const double* x);
void dm_gradient(const TestFunction& psi, int n, int m, const double* x, double* out, bool finite_difference = false);
/// Max relative difference between the analytic gradient of D^mψ and
/// central differences (h = 1e-5) at standard normal points.
double gradient_check(const TestFunction& psi, int n, int m, int points, std::uint64_t seed);

struct PoincareReport {
  Estimate var_psi;       // ((m+1)/m) Var_{γ^{m/(m+1)}} ψ
  Estimate var_dm;        // (1/(m+1)) Var_{γ_{n,m}} D^mψ
  Estimate grad_dm;       // (1/(2(m+1))) ∫|∇D^mψ|² dγ_{n,m}
  Estimate grad_psi;      // (1/2) ∫|∇ψ|² dγ^{m/(m+1)}
  double lhs = 0, rhs = 0;
  double slack = 0, slack_error = 0;  // rhs - lhs
  bool holds = false;                 // slack ≥ -3σ
};
/// Throws NotEven when ψ(-x) ≠ ψ(x) at random points.
PoincareReport poincare_probe(const TestFunction& psi, int n, int m, long samples, std::uint64_t seed,
                              bool finite_difference = false);

}  // namespace diffbody
