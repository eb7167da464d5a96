#pragma once
// Exact-arithmetic lattice tools: Gram-Schmidt over the rationals, Gauss and
// LLL reduction with recorded unimodular transforms, the Hadamard quality
// ratio, and box-bounded SVP/CVP enumeration with a Cramer-rule certificate
// that the enumerated box provably contains a shortest vector.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bsw/serialize.hpp"

namespace bsw::lat {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;
using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

struct rank_deficient : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline mpz_class dot(const ZVec& a, const ZVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline mpz_class norm_sq(const ZVec& a) { return dot(a, a); }

inline mpq_class dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline mpq_class norm_sq(const QVec& a) { return dot(a, a); }

// nearest integer, half rounded up
inline mpz_class round_nearest(const mpq_class& x) {
  mpq_class shifted = x + mpq_class(1, 2);
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
  return r;
}

inline void check_rectangular(const ZMat& rows) {
  if (rows.empty() || rows[0].empty()) throw std::invalid_argument("basis: empty");
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) throw std::invalid_argument("basis: ragged rows");
  if (rows.size() > rows[0].size())
    throw std::invalid_argument("basis: more rows than coordinates");
}

// Exact fraction-free determinant (Bareiss); M is consumed.
inline mpz_class det_bareiss(ZMat M) {
  std::size_t n = M.size();
  for (const auto& r : M)
    if (r.size() != n) throw std::invalid_argument("det: not square");
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && M[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = M[i][j] * M[k][k] - M[i][k] * M[k][j];
        mpz_divexact(M[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

inline ZMat identity_matrix(std::size_t n) {
  ZMat I(n, ZVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline ZMat mat_mul(const ZMat& A, const ZMat& B) {
  std::size_t n = A.size(), k = B.size(), m = B[0].size();
  for (const auto& r : A)
    if (r.size() != k) throw std::invalid_argument("mat_mul: shape mismatch");
  ZMat C(n, ZVec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
  return C;
}

inline bool is_unimodular(const ZMat& U) {
  mpz_class d = det_bareiss(U);
  return d == 1 || d == -1;
}

// ------------------------------------------------------------- Gram-Schmidt

struct GramSchmidtDecomp {
  QMat bstar;                     // orthogonal vectors, exact rationals
  QMat mu;                        // mu[k][i] for i < k; b_k = b*_k + sum mu[k][i] b*_i
  std::vector<mpq_class> nsq;     // ||b*_i||^2
};

inline GramSchmidtDecomp gram_schmidt(const ZMat& rows) {
  check_rectangular(rows);
  std::size_t n = rows.size(), m = rows[0].size();
  GramSchmidtDecomp gs;
  for (std::size_t k = 0; k < n; ++k) {
    QVec v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = mpq_class(rows[k][j]);
    QVec murow(k);
    for (std::size_t i = 0; i < k; ++i) {
      mpq_class num = 0;
      for (std::size_t j = 0; j < m; ++j) num += mpq_class(rows[k][j]) * gs.bstar[i][j];
      murow[i] = num / gs.nsq[i];
      for (std::size_t j = 0; j < m; ++j) v[j] -= murow[i] * gs.bstar[i][j];
    }
    mpq_class nv = norm_sq(v);
    if (nv == 0) throw rank_deficient("gram_schmidt: dependent rows");
    gs.bstar.push_back(std::move(v));
    gs.mu.push_back(std::move(murow));
    gs.nsq.push_back(std::move(nv));
  }
  return gs;
}

struct Basis {
  ZMat rows;
  Basis() = default;
  explicit Basis(ZMat r) : rows(std::move(r)) { gram_schmidt(rows); }  // independence check
  std::size_t n() const { return rows.size(); }
  std::size_t m() const { return rows.empty() ? 0 : rows[0].size(); }
};

// ------------------------------------------------------------- diagnostics

struct LllCheck {
  bool reduced = false;
  std::string violation;  // empty when reduced; else first failing condition
  explicit operator bool() const { return reduced; }
};

inline LllCheck is_lll_reduced(const ZMat& rows, const mpq_class& delta = mpq_class(3, 4)) {
  GramSchmidtDecomp gs = gram_schmidt(rows);
  std::size_t n = rows.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i < k; ++i)
      if (2 * abs(gs.mu[k][i]) > 1)
        return {false, "size condition |u(" + std::to_string(i) + "," + std::to_string(k) +
                           ")| > 1/2"};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mpq_class lhs = gs.nsq[i + 1] + gs.mu[i + 1][i] * gs.mu[i + 1][i] * gs.nsq[i];
    if (lhs < delta * gs.nsq[i])
      return {false, "Lovasz condition fails between rows " + std::to_string(i) + " and " +
                         std::to_string(i + 1)};
  }
  return {true, ""};
}

// ratio^(2n) = det^2 / prod ||b_i||^2, kept exact; `value` is the 2n-th root
// for display. Equals 1 exactly iff the basis is orthogonal.
struct HadamardRatio {
  mpq_class pow_2n;
  double value = 0.0;
};

inline HadamardRatio hadamard_ratio(const ZMat& rows) {
  check_rectangular(rows);
  std::size_t n = rows.size();
  if (n != rows[0].size()) throw std::invalid_argument("hadamard_ratio: square basis required");
  mpz_class d = det_bareiss(rows);
  if (d == 0) throw rank_deficient("hadamard_ratio: singular basis");
  mpz_class num = d * d;
  mpz_class den = 1;
  for (const auto& r : rows) den *= norm_sq(r);
  HadamardRatio h;
  h.pow_2n = mpq_class(num) / mpq_class(den);
  h.value = std::pow(h.pow_2n.get_d(), 1.0 / (2.0 * static_cast<double>(n)));
  return h;
}

// --------------------------------------------------------------- reduction

struct ReductionResult {
  ZMat basis;
  ZMat transform;  // unimodular U with basis = U * input
  unsigned swaps = 0;
};

inline void row_submul(ZVec& a, const mpz_class& f, const ZVec& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] -= f * b[j];
}

// Two-dimensional Gauss reduction: swap-to-order then subtract the rounded
// projection until the pair satisfies ||b1|| <= ||b2|| and |b1.b2| <= ||b1||^2/2.
inline ReductionResult gauss_reduce_2d(const ZMat& input) {
  if (input.size() != 2) throw std::invalid_argument("gauss_reduce_2d: need two rows");
  gram_schmidt(input);  // rank check
  ReductionResult res{input, identity_matrix(2), 0};
  ZMat& B = res.basis;
  for (int guard = 0; guard < 1000000; ++guard) {
    if (norm_sq(B[0]) > norm_sq(B[1])) {
      std::swap(B[0], B[1]);
      std::swap(res.transform[0], res.transform[1]);
      ++res.swaps;
    }
    mpq_class proj = mpq_class(dot(B[0], B[1])) / mpq_class(norm_sq(B[0]));
    mpz_class r = round_nearest(proj);
    if (r == 0) return res;
    row_submul(B[1], r, B[0]);
    row_submul(res.transform[1], r, res.transform[0]);
  }
  throw std::runtime_error("gauss_reduce_2d: did not converge");
}

// LLL with exact rational arithmetic: size-reduce row k, test the Lovasz
// condition against row k-1, swap and backtrack on failure.
inline ReductionResult lll_reduce(const ZMat& input, const mpq_class& delta = mpq_class(3, 4)) {
  if (4 * delta <= 1 || delta > 1) throw std::invalid_argument("lll_reduce: need 1/4 < delta <= 1");
  gram_schmidt(input);  // throws on rank deficiency
  std::size_t n = input.size();
  ReductionResult res{input, identity_matrix(n), 0};
  ZMat& B = res.basis;
  std::size_t k = 1;
  while (k < n) {
    GramSchmidtDecomp gs = gram_schmidt(B);
    for (std::size_t j = k; j-- > 0;) {
      mpz_class r = round_nearest(gs.mu[k][j]);
      if (r == 0) continue;
      row_submul(B[k], r, B[j]);
      row_submul(res.transform[k], r, res.transform[j]);
      // b* unchanged by row operations within the span; update mu in place
      mpq_class rq(r);
      gs.mu[k][j] -= rq;
      for (std::size_t i = 0; i < j; ++i) gs.mu[k][i] -= rq * gs.mu[j][i];
    }
    mpq_class lhs = gs.nsq[k] + gs.mu[k][k - 1] * gs.mu[k][k - 1] * gs.nsq[k - 1];
    if (lhs >= delta * gs.nsq[k - 1]) {
      ++k;
    } else {
      std::swap(B[k], B[k - 1]);
      std::swap(res.transform[k], res.transform[k - 1]);
      ++res.swaps;
      k = k > 1 ? k - 1 : 1;
    }
  }
  return res;
}

// -------------------------------------------------------------- enumeration

struct SvpResult {
  ZVec coeffs;
  ZVec vector;
  mpz_class norm_sq;
  bool certified = false;  // true when the box provably contains a shortest vector
};

namespace detail {

inline std::uint64_t box_size_checked(const std::vector<long>& bounds, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (long b : bounds) {
    std::uint64_t width = 2 * static_cast<std::uint64_t>(b) + 1;
    if (total > budget / width + 1) throw budget_exceeded("enumeration box exceeds budget");
    total *= width;
    if (total > budget) throw budget_exceeded("enumeration box exceeds budget");
  }
  return total;
}

// Visit every coefficient vector in the signed box; fn(coeffs, vector).
// Partial sums are maintained incrementally (one row addition per step).
template <typename Fn>
void enumerate_box(const ZMat& rows, const std::vector<long>& bounds, Fn&& fn) {
  std::size_t n = rows.size(), m = rows[0].size();
  std::vector<long> c(n, 0);
  ZVec zero(m, 0);
  auto rec = [&](auto&& self, std::size_t i, const ZVec& acc) -> void {
    if (i == n) {
      fn(c, acc);
      return;
    }
    ZVec cur = acc;
    for (std::size_t j = 0; j < m; ++j) cur[j] -= bounds[i] * rows[i][j];
    for (long v = -bounds[i];; ++v) {
      c[i] = v;
      self(self, i + 1, cur);
      if (v == bounds[i]) break;
      for (std::size_t j = 0; j < m; ++j) cur[j] += rows[i][j];
    }
  };
  rec(rec, 0, zero);
}

}  // namespace detail

// Gram determinant det(B B^T): squared lattice volume, works for n <= m.
inline mpz_class gram_det(const ZMat& rows) {
  std::size_t n = rows.size();
  ZMat G(n, ZVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) G[i][j] = dot(rows[i], rows[j]);
  return det_bareiss(G);
}

// Cramer certificate: any lattice vector x with ||x||^2 <= N has
// |c_i|^2 * det(G) <= N * prod_{j != i} ||b_j||^2 (Hadamard on the volume of
// the parallelepiped with b_i replaced by x).
inline std::vector<long> certified_coeff_bounds(const ZMat& rows, const mpz_class& N) {
  std::size_t n = rows.size();
  mpz_class G = gram_det(rows);
  if (G == 0) throw rank_deficient("certified_coeff_bounds: dependent rows");
  std::vector<long> bounds(n);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class num = N;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) num *= norm_sq(rows[j]);
    mpz_class q = num / G + 1;  // ceil(num/G) <= num/G + 1
    mpz_class b;
    mpz_sqrt(b.get_mpz_t(), q.get_mpz_t());
    if (b * b < q) ++b;
    if (!b.fits_slong_p()) throw budget_exceeded("certified bound does not fit a machine word");
    bounds[i] = b.get_si();
  }
  return bounds;
}

// Exhaustive minimum over the box [-coeff_bound, coeff_bound]^n; exact within
// the box. `certified` is set when the Cramer bounds for the found minimum
// fit inside the searched box.
inline SvpResult svp_bruteforce(const ZMat& rows, long coeff_bound,
                                std::uint64_t budget = 20000000) {
  check_rectangular(rows);
  if (coeff_bound < 1) throw std::invalid_argument("svp_bruteforce: bound must be >= 1");
  std::size_t n = rows.size();
  std::vector<long> bounds(n, coeff_bound);
  detail::box_size_checked(bounds, budget);
  SvpResult best;
  detail::enumerate_box(rows, bounds, [&](const std::vector<long>& c, const ZVec& v) {
    // sign normalization: first nonzero coefficient positive
    std::size_t first = 0;
    while (first < c.size() && c[first] == 0) ++first;
    if (first == c.size() || c[first] < 0) return;
    mpz_class nv = norm_sq(v);
    if (best.vector.empty() || nv < best.norm_sq) {
      best.vector = v;
      best.norm_sq = nv;
      best.coeffs.assign(c.begin(), c.end());
    }
  });
  std::vector<long> needed = certified_coeff_bounds(rows, best.norm_sq);
  best.certified = true;
  for (std::size_t i = 0; i < n; ++i)
    if (needed[i] > coeff_bound) best.certified = false;
  return best;
}

// Certified shortest vector: bounds derived from the shortest input row, so
// the enumerated box provably contains every vector at least that short.
inline SvpResult svp_exact(const ZMat& rows, std::uint64_t budget = 50000000) {
  check_rectangular(rows);
  mpz_class incumbent = norm_sq(rows[0]);
  for (const auto& r : rows) {
    mpz_class nr = norm_sq(r);
    if (nr < incumbent) incumbent = nr;
  }
  std::vector<long> bounds = certified_coeff_bounds(rows, incumbent);
  detail::box_size_checked(bounds, budget);
  SvpResult best;
  detail::enumerate_box(rows, bounds, [&](const std::vector<long>& c, const ZVec& v) {
    std::size_t first = 0;
    while (first < c.size() && c[first] == 0) ++first;
    if (first == c.size() || c[first] < 0) return;
    mpz_class nv = norm_sq(v);
    if (best.vector.empty() || nv < best.norm_sq) {
      best.vector = v;
      best.norm_sq = nv;
      best.coeffs.assign(c.begin(), c.end());
    }
  });
  best.certified = true;
  return best;
}

struct CvpResult {
  ZVec coeffs;
  ZVec vector;
  mpz_class dist_sq;
};

// Brute-force closest vector using the same enumerator; distance is the
// standard ||v - t||.
inline CvpResult cvp_bruteforce(const ZMat& rows, const ZVec& target, long coeff_bound,
                                std::uint64_t budget = 20000000) {
  check_rectangular(rows);
  if (target.size() != rows[0].size()) throw std::invalid_argument("cvp: target width mismatch");
  std::vector<long> bounds(rows.size(), coeff_bound);
  detail::box_size_checked(bounds, budget);
  CvpResult best;
  bool have = false;
  detail::enumerate_box(rows, bounds, [&](const std::vector<long>& c, const ZVec& v) {
    ZVec diff(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) diff[j] = v[j] - target[j];
    mpz_class d = norm_sq(diff);
    if (!have || d < best.dist_sq) {
      have = true;
      best.vector = v;
      best.dist_sq = d;
      best.coeffs.assign(c.begin(), c.end());
    }
  });
  return best;
}

// ---------------------------------------------------------------- file io

inline const std::string kBasisHeader = "lattice-basis v1";

inline void write_basis(const std::string& path, const ZMat& rows) {
  check_rectangular(rows);
  std::vector<std::string> lines;
  for (const auto& r : rows) lines.push_back(format_mpz_row(r));
  write_text_file(path, kBasisHeader, lines);
}

inline ZMat read_basis(const std::string& path) {
  ZMat rows;
  for (const auto& line : read_text_file(path, kBasisHeader))
    rows.push_back(parse_mpz_row(line));
  check_rectangular(rows);
  return rows;
}

}  // namespace bsw::lat
