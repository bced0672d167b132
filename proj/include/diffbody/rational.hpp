#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <string_view>
#include <vector>

namespace diffbody {

using Integer = mpz_class;

/// Exact scalar. gmpxx keeps arithmetic results in lowest terms but leaves
/// Rational(p, q) as given, so the two-argument constructor canonicalizes.
class Rational : public mpq_class {
 public:
  using mpq_class::mpq_class;
  Rational() = default;
  Rational(const mpq_class& q) : mpq_class(q) {}
  Rational(mpq_class&& q) : mpq_class(std::move(q)) {}
  Rational(const Integer& num, const Integer& den) : mpq_class(num, den) { canonicalize(); }
};

using Point = std::vector<Rational>;
using Matrix = std::vector<std::vector<Rational>>;  // row-major

/// Accepts "p", "-p" or "p/q". Decimal points and exponents are rejected.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }
std::vector<double> to_double(const Point& p);

/// Exact conversion of a finite double.
Rational from_double(double x);
Point from_double(const std::vector<double>& x);
/// Nearest point of the grid 2^-bits Z^d; keeps exact tests on float samples cheap.
Point dyadic_round(const std::vector<double>& x, int bits = 30);

Point make_point(std::initializer_list<long> coords);
Point zero_point(int dim);

Rational dot(const Point& a, const Point& b);
Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point scale(const Point& a, const Rational& s);
Point negate(const Point& a);
Point apply(const Matrix& m, const Point& x);

Matrix identity_matrix(int n);
Rational determinant(Matrix m);
/// Rank over the rationals.
int rank(Matrix m);

}  // namespace diffbody
