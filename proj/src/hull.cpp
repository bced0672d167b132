#include "diffbody/hull.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

#include "diffbody/error.hpp"

namespace diffbody {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

std::atomic<long> g_word_runs{0};
std::atomic<long> g_bignum_runs{0};
std::atomic<bool> g_force_bignum{false};

template <class Int>
struct Ops;

template <>
struct Ops<i64> {
  static i64 from(const Integer& z) { return static_cast<i64>(z.get_si()); }
  static Integer to_integer(i64 v) { return Integer(static_cast<long>(v)); }
  static bool is_zero(i64 v) { return v == 0; }
  // (a*b - c*d) / e, exact
  static i64 cross_div(i64 a, i64 b, i64 c, i64 d, i64 e) {
    return static_cast<i64>((static_cast<i128>(a) * b - static_cast<i128>(c) * d) / e);
  }
  static int sign_affine(const i64* n, const i64* p, int dim, i64 off, i64 k) {
    i128 s = -static_cast<i128>(off) * k;
    for (int i = 0; i < dim; ++i) s += static_cast<i128>(n[i]) * p[i];
    return (s > 0) - (s < 0);
  }
  static i64 dot(const i64* n, const i64* p, int dim) {
    i128 s = 0;
    for (int i = 0; i < dim; ++i) s += static_cast<i128>(n[i]) * p[i];
    return static_cast<i64>(s);
  }
  static i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }
  static i64 div(i64 a, i64 g) { return a / g; }
};

template <>
struct Ops<Integer> {
  static Integer from(const Integer& z) { return z; }
  static Integer to_integer(const Integer& v) { return v; }
  static bool is_zero(const Integer& v) { return sgn(v) == 0; }
  static Integer cross_div(const Integer& a, const Integer& b, const Integer& c, const Integer& d,
                           const Integer& e) {
    Integer t = a * b - c * d;
    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), e.get_mpz_t());
    return t;
  }
  static int sign_affine(const Integer* n, const Integer* p, int dim, const Integer& off, long k) {
    Integer s = -off * k;
    for (int i = 0; i < dim; ++i) s += n[i] * p[i];
    return sgn(s);
  }
  static Integer dot(const Integer* n, const Integer* p, int dim) {
    Integer s = 0;
    for (int i = 0; i < dim; ++i) s += n[i] * p[i];
    return s;
  }
  static Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
  }
  static Integer div(const Integer& a, const Integer& g) {
    Integer t;
    mpz_divexact(t.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    return t;
  }
};

// Fraction-free determinant of a k×k row-major matrix; destroys `a`.
template <class Int>
Int bareiss_det(std::vector<Int>& a, int k) {
  if (k == 0) return Int(1);
  bool negate = false;
  Int prev(1);
  for (int c = 0; c < k; ++c) {
    int p = c;
    while (p < k && Ops<Int>::is_zero(a[static_cast<std::size_t>(p * k + c)])) ++p;
    if (p == k) return Int(0);
    if (p != c) {
      for (int j = 0; j < k; ++j) std::swap(a[static_cast<std::size_t>(p * k + j)], a[static_cast<std::size_t>(c * k + j)]);
      negate = !negate;
    }
    const Int pivot = a[static_cast<std::size_t>(c * k + c)];
    for (int i = c + 1; i < k; ++i) {
      const Int lead = a[static_cast<std::size_t>(i * k + c)];
      for (int j = c + 1; j < k; ++j) {
        auto& x = a[static_cast<std::size_t>(i * k + j)];
        x = Ops<Int>::cross_div(x, pivot, lead, a[static_cast<std::size_t>(c * k + j)], prev);
      }
    }
    prev = pivot;
  }
  Int det = a[static_cast<std::size_t>((k - 1) * k + (k - 1))];
  return negate ? Int(-det) : det;
}

// Rank of a rows×cols row-major matrix by fraction-free elimination.
template <class Int>
int bareiss_rank(std::vector<Int> a, int rows, int cols) {
  int r = 0;
  Int prev(1);
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && Ops<Int>::is_zero(a[static_cast<std::size_t>(p * cols + c)])) ++p;
    if (p == rows) continue;
    if (p != r)
      for (int j = 0; j < cols; ++j) std::swap(a[static_cast<std::size_t>(p * cols + j)], a[static_cast<std::size_t>(r * cols + j)]);
    const Int pivot = a[static_cast<std::size_t>(r * cols + c)];
    for (int i = r + 1; i < rows; ++i) {
      const Int lead = a[static_cast<std::size_t>(i * cols + c)];
      for (int j = c + 1; j < cols; ++j) {
        auto& x = a[static_cast<std::size_t>(i * cols + j)];
        x = Ops<Int>::cross_div(x, pivot, lead, a[static_cast<std::size_t>(r * cols + j)], prev);
      }
      a[static_cast<std::size_t>(i * cols + c)] = Int(0);
    }
    prev = pivot;
    ++r;
  }
  return r;
}

struct KernelOutput {
  std::vector<std::vector<int>> simplices;
  std::vector<std::vector<Integer>> normals;
  std::vector<Integer> offsets;
  std::vector<Integer> cone_dets;  // |det(v_1 - ref, ..., v_d - ref)|
  int ref = 0;
};

template <class Int>
class BeneathBeyond {
 public:
  BeneathBeyond(int dim, int count, std::vector<Int> coords)
      : d_(dim), n_(count), pts_(std::move(coords)), conflict_(static_cast<std::size_t>(count), -1) {}

  KernelOutput run() {
    initial_simplex();
    for (int p = 0; p < n_; ++p)
      if (conflict_[static_cast<std::size_t>(p)] >= 0) insert(p);
    return collect();
  }

 private:
  const Int* point(int i) const { return &pts_[static_cast<std::size_t>(i) * static_cast<std::size_t>(d_)]; }
  const Int* normal(int f) const { return &normals_[static_cast<std::size_t>(f) * static_cast<std::size_t>(d_)]; }
  int& nbr(int f, int k) { return nbr_[static_cast<std::size_t>(f * d_ + k)]; }
  int vert(int f, int k) const { return verts_[static_cast<std::size_t>(f * d_ + k)]; }

  bool visible(int f, int q) const {
    return Ops<Int>::sign_affine(normal(f), point(q), d_, offsets_[static_cast<std::size_t>(f)], 1) > 0;
  }

  void initial_simplex() {
    simplex_.push_back(0);
    std::vector<Int> rows;
    for (int i = 1; i < n_ && static_cast<int>(simplex_.size()) <= d_; ++i) {
      std::vector<Int> trial = rows;
      for (int k = 0; k < d_; ++k) trial.push_back(point(i)[k] - point(0)[k]);
      const int r = static_cast<int>(simplex_.size());
      if (bareiss_rank<Int>(trial, r, d_) == r) {
        rows = std::move(trial);
        simplex_.push_back(i);
      }
    }
    if (static_cast<int>(simplex_.size()) != d_ + 1)
      throw Error(ErrorKind::DegenerateInput,
                  "affine hull has dimension " + std::to_string(simplex_.size() - 1) + " < " + std::to_string(d_));

    interior_sum_.assign(static_cast<std::size_t>(d_), Int(0));
    for (int s : simplex_)
      for (int k = 0; k < d_; ++k) interior_sum_[static_cast<std::size_t>(k)] += point(s)[k];

    std::vector<int> vs;
    for (int k = 0; k <= d_; ++k) {
      vs.clear();
      for (int j = 0; j <= d_; ++j)
        if (j != k) vs.push_back(simplex_[static_cast<std::size_t>(j)]);
      add_facet(vs);
    }
    // facet k omits simplex vertex k; the neighbour across simplex vertex j is facet j
    for (int k = 0; k <= d_; ++k) {
      int pos = 0;
      for (int j = 0; j <= d_; ++j)
        if (j != k) nbr(k, pos++) = j;
    }
    std::vector<char> in_simplex(static_cast<std::size_t>(n_), 0);
    for (int s : simplex_) in_simplex[static_cast<std::size_t>(s)] = 1;
    for (int q = 0; q < n_; ++q) {
      if (in_simplex[static_cast<std::size_t>(q)]) continue;
      for (int f = 0; f <= d_; ++f)
        if (visible(f, q)) {
          outside_[static_cast<std::size_t>(f)].push_back(q);
          conflict_[static_cast<std::size_t>(q)] = f;
          break;
        }
    }
  }

  int add_facet(const std::vector<int>& vs) {
    const int f = static_cast<int>(alive_.size());
    verts_.insert(verts_.end(), vs.begin(), vs.end());
    nbr_.insert(nbr_.end(), static_cast<std::size_t>(d_), -1);
    alive_.push_back(1);
    stamp_.push_back(0);
    state_.push_back(0);
    outside_.emplace_back();

    // generalized cross product of the edge vectors from vs[0]
    const int m = d_ - 1;
    std::vector<Int> edges(static_cast<std::size_t>(m * d_));
    for (int r = 0; r < m; ++r)
      for (int k = 0; k < d_; ++k)
        edges[static_cast<std::size_t>(r * d_ + k)] = point(vs[static_cast<std::size_t>(r + 1)])[k] - point(vs[0])[k];
    std::vector<Int> nrm(static_cast<std::size_t>(d_));
    Int g(0);
    for (int j = 0; j < d_; ++j) {
      scratch_.assign(static_cast<std::size_t>(m * m), Int(0));
      for (int r = 0; r < m; ++r) {
        int cc = 0;
        for (int k = 0; k < d_; ++k)
          if (k != j) scratch_[static_cast<std::size_t>(r * m + cc++)] = edges[static_cast<std::size_t>(r * d_ + k)];
      }
      Int minor = bareiss_det<Int>(scratch_, m);
      nrm[static_cast<std::size_t>(j)] = (j % 2) ? Int(-minor) : minor;
      g = Ops<Int>::gcd(g, nrm[static_cast<std::size_t>(j)]);
    }
    if (Ops<Int>::is_zero(g)) throw std::logic_error("hull kernel built a degenerate facet");
    for (auto& c : nrm) c = Ops<Int>::div(c, g);
    Int off = Ops<Int>::dot(nrm.data(), point(vs[0]), d_);
    const int side = Ops<Int>::sign_affine(nrm.data(), interior_sum_.data(), d_, off, static_cast<long>(d_ + 1));
    if (side == 0) throw std::logic_error("hull kernel lost its interior point");
    if (side > 0) {
      for (auto& c : nrm) c = -c;
      off = -off;
    }
    normals_.insert(normals_.end(), nrm.begin(), nrm.end());
    offsets_.push_back(off);
    return f;
  }

  void insert(int p) {
    const int start = conflict_[static_cast<std::size_t>(p)];
    ++epoch_;
    std::vector<int> visible_set{start};
    std::vector<std::pair<int, int>> horizon;  // (visible facet, position)
    stamp_[static_cast<std::size_t>(start)] = epoch_;
    state_[static_cast<std::size_t>(start)] = 1;
    for (std::size_t head = 0; head < visible_set.size(); ++head) {
      const int f = visible_set[head];
      for (int k = 0; k < d_; ++k) {
        const int g = nbr(f, k);
        if (stamp_[static_cast<std::size_t>(g)] != epoch_) {
          stamp_[static_cast<std::size_t>(g)] = epoch_;
          state_[static_cast<std::size_t>(g)] = visible(g, p) ? 1 : 2;
          if (state_[static_cast<std::size_t>(g)] == 1) visible_set.push_back(g);
        }
        if (state_[static_cast<std::size_t>(g)] == 2) horizon.emplace_back(f, k);
      }
    }

    struct RidgeRef {
      std::vector<int> key;
      int facet;
      int pos;
    };
    std::vector<RidgeRef> ridges;
    std::vector<int> created;
    created.reserve(horizon.size());
    std::vector<int> vs(static_cast<std::size_t>(d_));
    for (auto [f, k] : horizon) {
      for (int j = 0; j < d_; ++j) vs[static_cast<std::size_t>(j)] = vert(f, j);
      vs[static_cast<std::size_t>(k)] = p;
      const int g = nbr(f, k);
      const int nf = add_facet(vs);
      created.push_back(nf);
      nbr(nf, k) = g;
      for (int j = 0; j < d_; ++j)
        if (nbr(g, j) == f) nbr(g, j) = nf;
      for (int j = 0; j < d_; ++j) {
        if (j == k) continue;
        RidgeRef r{{}, nf, j};
        r.key.reserve(static_cast<std::size_t>(d_ - 1));
        for (int i = 0; i < d_; ++i)
          if (i != j) r.key.push_back(vs[static_cast<std::size_t>(i)]);
        std::sort(r.key.begin(), r.key.end());
        ridges.push_back(std::move(r));
      }
    }
    std::sort(ridges.begin(), ridges.end(), [](const RidgeRef& a, const RidgeRef& b) { return a.key < b.key; });
    for (std::size_t i = 0; i + 1 < ridges.size(); i += 2) {
      if (ridges[i].key != ridges[i + 1].key) throw std::logic_error("hull kernel produced an unmatched ridge");
      nbr(ridges[i].facet, ridges[i].pos) = ridges[i + 1].facet;
      nbr(ridges[i + 1].facet, ridges[i + 1].pos) = ridges[i].facet;
    }
    if (ridges.size() % 2 != 0) throw std::logic_error("hull kernel produced an odd ridge count");

    conflict_[static_cast<std::size_t>(p)] = -1;
    for (int f : visible_set) {
      alive_[static_cast<std::size_t>(f)] = 0;
      for (int q : outside_[static_cast<std::size_t>(f)]) {
        if (q == p) continue;
        int target = -1;
        for (int nf : created)
          if (visible(nf, q)) {
            target = nf;
            break;
          }
        conflict_[static_cast<std::size_t>(q)] = target;
        if (target >= 0) outside_[static_cast<std::size_t>(target)].push_back(q);
      }
      std::vector<int>().swap(outside_[static_cast<std::size_t>(f)]);
    }
  }

  KernelOutput collect() {
    KernelOutput out;
    out.ref = simplex_.front();
    std::vector<Int> mat(static_cast<std::size_t>(d_ * d_));
    for (int f = 0; f < static_cast<int>(alive_.size()); ++f) {
      if (!alive_[static_cast<std::size_t>(f)]) continue;
      std::vector<int> vs(static_cast<std::size_t>(d_));
      std::vector<Integer> nrm(static_cast<std::size_t>(d_));
      for (int k = 0; k < d_; ++k) {
        vs[static_cast<std::size_t>(k)] = vert(f, k);
        nrm[static_cast<std::size_t>(k)] = Ops<Int>::to_integer(normal(f)[k]);
        for (int j = 0; j < d_; ++j)
          mat[static_cast<std::size_t>(k * d_ + j)] = point(vert(f, k))[j] - point(out.ref)[j];
      }
      Integer det = Ops<Int>::to_integer(bareiss_det<Int>(mat, d_));
      out.simplices.push_back(std::move(vs));
      out.normals.push_back(std::move(nrm));
      out.offsets.push_back(Ops<Int>::to_integer(offsets_[static_cast<std::size_t>(f)]));
      out.cone_dets.push_back(abs(det));
    }
    return out;
  }

  int d_;
  int n_;
  std::vector<Int> pts_;
  std::vector<int> conflict_;
  std::vector<int> simplex_;
  std::vector<Int> interior_sum_;

  std::vector<int> verts_;
  std::vector<int> nbr_;
  std::vector<Int> normals_;
  std::vector<Int> offsets_;
  std::vector<char> alive_;
  std::vector<int> stamp_;
  std::vector<char> state_;
  std::vector<std::vector<int>> outside_;
  std::vector<Int> scratch_;
  int epoch_ = 0;
};

template <class Int>
KernelOutput run_kernel(int dim, const std::vector<std::vector<Integer>>& pts) {
  std::vector<Int> coords;
  coords.reserve(pts.size() * static_cast<std::size_t>(dim));
  for (const auto& p : pts)
    for (const auto& c : p) coords.push_back(Ops<Int>::from(c));
  return BeneathBeyond<Int>(dim, static_cast<int>(pts.size()), std::move(coords)).run();
}

// Largest entry magnitude C for which every Bareiss intermediate and every
// affine evaluation of the word kernel stays inside int64/int128.
bool fits_word_kernel(int dim, const Integer& max_abs) {
  const long double c = std::max<long double>(1.0L, std::ldexp(static_cast<long double>(mpz_get_d(max_abs.get_mpz_t())), 0));
  const long double d = dim;
  const long double log2_b = d * std::log2(2.0L * c) + 0.5L * d * std::log2(d);
  const long double log2_eval = log2_b + std::log2(c) + std::log2(d) + std::log2(d + 1.0L) + 2.0L;
  return log2_b < 61.0L && log2_eval < 124.0L;
}

}  // namespace

HullKernelStats hull_kernel_stats() { return {g_word_runs.load(), g_bignum_runs.load()}; }
void force_bignum_hull_kernel(bool on) { g_force_bignum = on; }

Hull compute_hull(std::span<const Point> input) {
  if (input.empty()) throw Error(ErrorKind::EmptyInput, "convex hull of no points");
  const int d = static_cast<int>(input.front().size());
  if (d < 1) throw Error(ErrorKind::DimensionMismatch, "points must have dimension at least 1");
  for (const auto& p : input)
    if (static_cast<int>(p.size()) != d) throw Error(ErrorKind::DimensionMismatch, "points of mixed dimension");

  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (static_cast<int>(pts.size()) < d + 1)
    throw Error(ErrorKind::DegenerateInput, "fewer than dim+1 distinct points");

  Integer scale = 1;
  for (const auto& p : pts)
    for (const auto& c : p) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());

  std::vector<std::vector<Integer>> ints(pts.size(), std::vector<Integer>(static_cast<std::size_t>(d)));
  std::vector<Integer> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < d; ++k) {
      const auto& c = pts[i][static_cast<std::size_t>(k)];
      Integer v = c.get_num() * (scale / c.get_den());
      if (i == 0 || v < lo[static_cast<std::size_t>(k)]) lo[static_cast<std::size_t>(k)] = v;
      if (i == 0 || v > hi[static_cast<std::size_t>(k)]) hi[static_cast<std::size_t>(k)] = v;
      ints[i][static_cast<std::size_t>(k)] = std::move(v);
    }
  std::vector<Integer> shift(static_cast<std::size_t>(d));
  Integer max_abs = 0;
  for (int k = 0; k < d; ++k) {
    Integer s = lo[static_cast<std::size_t>(k)] + hi[static_cast<std::size_t>(k)];
    mpz_fdiv_q_2exp(s.get_mpz_t(), s.get_mpz_t(), 1);
    shift[static_cast<std::size_t>(k)] = s;
  }
  for (auto& p : ints)
    for (int k = 0; k < d; ++k) {
      p[static_cast<std::size_t>(k)] -= shift[static_cast<std::size_t>(k)];
      if (abs(p[static_cast<std::size_t>(k)]) > max_abs) max_abs = abs(p[static_cast<std::size_t>(k)]);
    }

  KernelOutput k;
  if (!g_force_bignum && fits_word_kernel(d, max_abs)) {
    ++g_word_runs;
    k = run_kernel<i64>(d, ints);
  } else {
    ++g_bignum_runs;
    k = run_kernel<Integer>(d, ints);
  }

  Hull hull;
  // facets: a·y ≤ b in shifted integer coordinates  ⇔  a·x ≤ (b + a·shift) / scale
  std::map<std::pair<std::vector<Integer>, Integer>, int> facet_ids;
  std::vector<int> simplex_key(k.simplices.size());
  for (std::size_t s = 0; s < k.simplices.size(); ++s) {
    auto key = std::make_pair(k.normals[s], k.offsets[s]);
    auto it = facet_ids.try_emplace(std::move(key), static_cast<int>(facet_ids.size())).first;
    simplex_key[s] = it->second;
  }
  std::vector<Halfspace> halfspaces(facet_ids.size());
  for (const auto& [key, id] : facet_ids) {
    Halfspace h;
    Integer b = key.second;
    for (int j = 0; j < d; ++j) {
      h.normal.emplace_back(key.first[static_cast<std::size_t>(j)]);
      b += key.first[static_cast<std::size_t>(j)] * shift[static_cast<std::size_t>(j)];
    }
    h.offset = Rational(b, scale);
    h.offset.canonicalize();
    halfspaces[static_cast<std::size_t>(id)] = std::move(h);
  }
  std::vector<int> order(halfspaces.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return halfspaces[static_cast<std::size_t>(a)] < halfspaces[static_cast<std::size_t>(b)]; });
  std::vector<int> rank_of(halfspaces.size());
  std::vector<Halfspace> sorted;
  sorted.reserve(halfspaces.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    sorted.push_back(halfspaces[static_cast<std::size_t>(order[i])]);
  }
  hull.simplex_facet.reserve(k.simplices.size());
  for (int key : simplex_key) hull.simplex_facet.push_back(rank_of[static_cast<std::size_t>(key)]);

  // a triangulation vertex is extreme iff the facets through it span R^d
  std::vector<std::vector<int>> incident(pts.size());
  for (std::size_t s = 0; s < k.simplices.size(); ++s)
    for (int v : k.simplices[s]) incident[static_cast<std::size_t>(v)].push_back(hull.simplex_facet[s]);
  std::vector<Point> vertices;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    auto& fs = incident[v];
    if (fs.empty()) continue;
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    if (static_cast<int>(fs.size()) < d) continue;
    Matrix normals;
    normals.reserve(fs.size());
    for (int f : fs) normals.push_back(sorted[static_cast<std::size_t>(f)].normal);
    if (rank(std::move(normals)) == d) vertices.push_back(pts[v]);
  }

  Integer total = 0;
  for (const auto& c : k.cone_dets) total += c;
  Integer fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  Integer scale_pow;
  mpz_pow_ui(scale_pow.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(d));
  hull.volume = Rational(total, fact * scale_pow);
  hull.volume.canonicalize();

  Point csum = zero_point(d);
  const Point& ref = pts[static_cast<std::size_t>(k.ref)];
  for (std::size_t s = 0; s < k.simplices.size(); ++s) {
    if (sgn(k.cone_dets[s]) == 0) continue;
    Point vs = ref;
    for (int v : k.simplices[s])
      for (int j = 0; j < d; ++j) vs[static_cast<std::size_t>(j)] += pts[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
    const Rational w(k.cone_dets[s]);
    for (int j = 0; j < d; ++j) csum[static_cast<std::size_t>(j)] += w * vs[static_cast<std::size_t>(j)];
  }
  const Rational denom = Rational(total) * (d + 1);
  for (auto& c : csum) c /= denom;
  hull.centroid = std::move(csum);

  hull.polytope = VPolytope::from_canonical(d, std::move(vertices));
  hull.facets = HPolytope(d, std::move(sorted), true);
  hull.boundary_simplices = std::move(k.simplices);
  hull.support_points = std::move(pts);
  return hull;
}

VPolytope convex_hull(std::span<const Point> points) { return compute_hull(points).polytope; }

}  // namespace diffbody
