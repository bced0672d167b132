#include "diffbody/lp.hpp"

#include <cmath>
#include <limits>

#include "diffbody/error.hpp"

namespace diffbody {

namespace {

constexpr double kFloatEps = 1e-9;

int sign(const Rational& x) { return sgn(x); }
int sign(double x) { return x > kFloatEps ? 1 : (x < -kFloatEps ? -1 : 0); }

bool before(const Rational& a, const Rational& b) { return a < b; }
bool same(const Rational& a, const Rational& b) { return a == b; }
bool before(double a, double b) { return a < b - kFloatEps; }
bool same(double a, double b) { return std::abs(a - b) <= kFloatEps; }

// basic[i] = a(i, cols) + Σ_j a(i, j) · nonbasic[j]; row `rows` is the objective.
template <class T>
class Dictionary {
 public:
  Dictionary(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>((rows + 1) * (cols + 1))) {}

  T& at(int i, int j) { return a_[static_cast<std::size_t>(i * (cols_ + 1) + j)]; }
  T& constant(int i) { return at(i, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::vector<int> basic, nonbasic;

  void pivot(int r, int c) {
    const T inv = 1 / at(r, c);
    for (int j = 0; j <= cols_; ++j)
      if (j != c) at(r, j) *= -inv;
    at(r, c) = inv;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const T coef = at(i, c);
      if (coef == 0) continue;
      for (int j = 0; j <= cols_; ++j)
        if (j != c) at(i, j) += coef * at(r, j);
      at(i, c) = coef * at(r, c);
    }
    std::swap(basic[static_cast<std::size_t>(r)], nonbasic[static_cast<std::size_t>(c)]);
  }

  // Maximizes the objective row with Bland's rule. Returns false if unbounded.
  bool optimize() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j)
        if (sign(at(rows_, j)) > 0 && (enter < 0 || nonbasic[static_cast<std::size_t>(j)] < nonbasic[static_cast<std::size_t>(enter)]))
          enter = j;
      if (enter < 0) return true;
      int leave = -1;
      T best;
      for (int i = 0; i < rows_; ++i) {
        if (sign(at(i, enter)) >= 0) continue;
        T ratio = constant(i) / -at(i, enter);
        if (leave < 0 || before(ratio, best) ||
            (same(ratio, best) && basic[static_cast<std::size_t>(i)] < basic[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void drop_column(int c) {
    std::vector<T> b(static_cast<std::size_t>((rows_ + 1) * cols_));
    for (int i = 0; i <= rows_; ++i) {
      int jj = 0;
      for (int j = 0; j <= cols_; ++j)
        if (j != c) b[static_cast<std::size_t>(i * cols_ + jj++)] = std::move(at(i, j));
    }
    a_ = std::move(b);
    nonbasic.erase(nonbasic.begin() + c);
    --cols_;
  }

  void drop_row(int r) {
    for (int i = r; i < rows_; ++i)
      for (int j = 0; j <= cols_; ++j) at(i, j) = at(i + 1, j);
    basic.erase(basic.begin() + r);
    --rows_;
    a_.resize(static_cast<std::size_t>((rows_ + 1) * (cols_ + 1)));
  }

 private:
  int rows_, cols_;
  std::vector<T> a_;
};

template <class T>
struct Solution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<T> x;
};

// Rows a_i·x ≤ b_i over free x ∈ R^dim, `a` row-major. Maximizes c when given.
template <class T>
Solution<T> solve(int dim, int rows, const std::vector<T>& a, const std::vector<T>& b, const std::vector<T>* c) {
  // variables: u_k = 0..dim-1, w_k = dim..2dim-1 (x = u - w), slacks, then the auxiliary x0
  const int aux = 2 * dim + rows;
  const auto d = static_cast<std::size_t>(dim);
  Dictionary<T> dict(rows, 2 * dim + 1);
  for (int j = 0; j < 2 * dim; ++j) dict.nonbasic.push_back(j);
  dict.nonbasic.push_back(aux);
  int most_negative = -1;
  for (int i = 0; i < rows; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    dict.basic.push_back(2 * dim + i);
    for (int k = 0; k < dim; ++k) {
      dict.at(i, k) = -a[ii * d + static_cast<std::size_t>(k)];
      dict.at(i, dim + k) = a[ii * d + static_cast<std::size_t>(k)];
    }
    dict.at(i, 2 * dim) = 1;
    dict.constant(i) = b[ii];
    if (sign(b[ii]) < 0 && (most_negative < 0 || b[ii] < dict.constant(most_negative))) most_negative = i;
  }

  if (most_negative >= 0) {
    dict.at(rows, 2 * dim) = -1;
    dict.pivot(most_negative, 2 * dim);
    dict.optimize();
    if (sign(dict.constant(dict.rows())) < 0) return {};
    for (int i = 0; i < dict.rows(); ++i) {
      if (dict.basic[static_cast<std::size_t>(i)] != aux) continue;
      int col = -1;
      for (int j = 0; j < dict.cols(); ++j)
        if (sign(dict.at(i, j)) != 0) {
          col = j;
          break;
        }
      if (col < 0) dict.drop_row(i);
      else dict.pivot(i, col);
      break;
    }
  }
  for (int j = 0; j < dict.cols(); ++j)
    if (dict.nonbasic[static_cast<std::size_t>(j)] == aux) {
      dict.drop_column(j);
      break;
    }

  const int obj = dict.rows();
  for (int j = 0; j <= dict.cols(); ++j) dict.at(obj, j) = 0;
  if (c) {
    auto add_cost = [&](int var, const T& cost) {
      if (cost == 0) return;
      for (int j = 0; j < dict.cols(); ++j)
        if (dict.nonbasic[static_cast<std::size_t>(j)] == var) {
          dict.at(obj, j) += cost;
          return;
        }
      for (int i = 0; i < dict.rows(); ++i)
        if (dict.basic[static_cast<std::size_t>(i)] == var) {
          for (int j = 0; j <= dict.cols(); ++j) dict.at(obj, j) += cost * dict.at(i, j);
          return;
        }
    };
    for (int k = 0; k < dim; ++k) {
      add_cost(k, (*c)[static_cast<std::size_t>(k)]);
      add_cost(dim + k, -(*c)[static_cast<std::size_t>(k)]);
    }
    if (!dict.optimize()) return {LpStatus::Unbounded, {}};
  }

  Solution<T> res;
  res.status = LpStatus::Feasible;
  res.x.assign(d, T(0));
  for (int i = 0; i < dict.rows(); ++i) {
    const int var = dict.basic[static_cast<std::size_t>(i)];
    if (var < dim) res.x[static_cast<std::size_t>(var)] += dict.constant(i);
    else if (var < 2 * dim) res.x[static_cast<std::size_t>(var - dim)] -= dict.constant(i);
  }
  return res;
}

}  // namespace

LpResult lp_solve(int dim, std::span<const Halfspace> constraints, const std::optional<Point>& objective) {
  for (const auto& h : constraints)
    if (static_cast<int>(h.normal.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "constraint of wrong dimension");
  if (objective && static_cast<int>(objective->size()) != dim)
    throw Error(ErrorKind::DimensionMismatch, "objective of wrong dimension");
  std::vector<Rational> a, b;
  a.reserve(constraints.size() * static_cast<std::size_t>(dim));
  for (const auto& h : constraints) {
    a.insert(a.end(), h.normal.begin(), h.normal.end());
    b.push_back(h.offset);
  }
  Solution<Rational> s = solve<Rational>(dim, static_cast<int>(constraints.size()), a, b, objective ? &*objective : nullptr);
  LpResult res;
  res.status = s.status;
  if (s.status != LpStatus::Feasible) return res;
  res.x = std::move(s.x);
  res.value = objective ? dot(*objective, res.x) : Rational(0);
  return res;
}

LpResult lp_feasible(int dim, std::span<const Halfspace> constraints, const std::optional<Point>& objective) {
  LpResult r = lp_solve(dim, constraints, objective);
  if (r.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "objective unbounded above");
  return r;
}

FloatLpResult lp_solve_float(int dim, const std::vector<double>& a, const std::vector<double>& b,
                             const std::vector<double>* objective) {
  const auto rows = b.size();
  if (a.size() != rows * static_cast<std::size_t>(dim)) throw Error(ErrorKind::DimensionMismatch, "constraint matrix shape");
  if (objective && objective->size() != static_cast<std::size_t>(dim))
    throw Error(ErrorKind::DimensionMismatch, "objective of wrong dimension");
  // Rows are scaled to unit max-norm so the pivot tolerance is meaningful.
  std::vector<double> an(a), bn(b);
  const auto d = static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < rows; ++i) {
    double scale = std::abs(bn[i]);
    for (std::size_t k = 0; k < d; ++k) scale = std::max(scale, std::abs(an[i * d + k]));
    if (scale == 0) continue;
    for (std::size_t k = 0; k < d; ++k) an[i * d + k] /= scale;
    bn[i] /= scale;
  }
  Solution<double> s = solve<double>(dim, static_cast<int>(rows), an, bn, objective);
  FloatLpResult res;
  res.status = s.status;
  res.x = std::move(s.x);
  if (s.status == LpStatus::Feasible && objective)
    for (std::size_t k = 0; k < d; ++k) res.value += (*objective)[k] * res.x[k];
  return res;
}

}  // namespace diffbody
