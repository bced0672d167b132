#include "diffbody/rational.hpp"

#include <cmath>
#include <utility>

#include "diffbody/error.hpp"

namespace diffbody {

namespace {

bool valid_integer_text(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den.front() == '-' || den.front() == '+')
    throw Error(ErrorKind::ParseError, "not a rational literal: '" + std::string(text) + "'");
  Integer n{std::string(num.front() == '+' ? num.substr(1) : num)};
  Integer d{std::string(den)};
  if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::vector<double> to_double(const Point& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(c.get_d());
  return out;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::ParseError, "non-finite coordinate");
  return Rational(x);
}

Point from_double(const std::vector<double>& x) {
  Point out;
  out.reserve(x.size());
  for (double v : x) out.push_back(from_double(v));
  return out;
}

Point dyadic_round(const std::vector<double>& x, int bits) {
  const Integer den = Integer(1) << bits;
  Point out;
  out.reserve(x.size());
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "non-finite coordinate");
    Rational q(Integer(static_cast<long>(std::llround(std::ldexp(v, bits)))), den);
    q.canonicalize();
    out.push_back(std::move(q));
  }
  return out;
}

Point make_point(std::initializer_list<long> coords) {
  Point p;
  for (long c : coords) p.emplace_back(c);
  return p;
}

Point zero_point(int dim) { return Point(static_cast<std::size_t>(dim), Rational(0)); }

Rational dot(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product of unequal lengths");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Point add(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "sum of unequal lengths");
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Point sub(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "difference of unequal lengths");
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Point scale(const Point& a, const Rational& s) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Point negate(const Point& a) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Point apply(const Matrix& m, const Point& x) {
  Point r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(dot(row, x));
  return r;
}

Matrix identity_matrix(int n) {
  Matrix m(static_cast<std::size_t>(n), Point(static_cast<std::size_t>(n), Rational(0)));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return m;
}

Rational determinant(Matrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

int rank(Matrix m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace diffbody
