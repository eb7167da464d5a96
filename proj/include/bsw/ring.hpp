#pragma once
// Arithmetic in R_q = Z_q[X]/(X^d + 1) with d a power of two: schoolbook
// negacyclic multiplication over machine integers (toy moduli only; the
// accumulator needs d*q^2 to fit in a long), plus vector/matrix forms and
// deterministic hashing into the ring.

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bsw/hash.hpp"
#include "bsw/rng.hpp"

namespace bsw::ring {

inline bool is_pow2(unsigned v) { return v != 0 && (v & (v - 1)) == 0; }

struct RingElement {
  unsigned d = 0;
  long q = 0;
  std::vector<long> c;  // d coefficients in [0, q)

  bool operator==(const RingElement&) const = default;
};

inline void check_params(unsigned d, long q) {
  if (!is_pow2(d)) throw std::invalid_argument("ring: d must be a power of two");
  if (q < 2 || q > (1L << 31)) throw std::invalid_argument("ring: bad modulus");
  unsigned long long qq = static_cast<unsigned long long>(q) * static_cast<unsigned long long>(q);
  if (static_cast<unsigned long long>(d) > (1ULL << 62) / qq)
    throw std::invalid_argument("ring: modulus too large for machine accumulation");
}

inline void check_same(const RingElement& a, const RingElement& b) {
  if (a.d != b.d || a.q != b.q) throw std::invalid_argument("ring: modulus mismatch");
}

inline long mod_q(long v, long q) {
  long r = v % q;
  return r < 0 ? r + q : r;
}

inline RingElement ring_zero(unsigned d, long q) {
  check_params(d, q);
  return {d, q, std::vector<long>(d, 0)};
}

inline RingElement ring_const(unsigned d, long q, long v) {
  RingElement r = ring_zero(d, q);
  r.c[0] = mod_q(v, q);
  return r;
}

// X^e for 0 <= e < d
inline RingElement ring_x_pow(unsigned d, long q, unsigned e) {
  if (e >= d) throw std::invalid_argument("ring_x_pow: exponent out of range");
  RingElement r = ring_zero(d, q);
  r.c[e] = 1;
  return r;
}

inline RingElement operator+(const RingElement& a, const RingElement& b) {
  check_same(a, b);
  RingElement r = a;
  for (unsigned i = 0; i < a.d; ++i) r.c[i] = mod_q(a.c[i] + b.c[i], a.q);
  return r;
}

inline RingElement operator-(const RingElement& a, const RingElement& b) {
  check_same(a, b);
  RingElement r = a;
  for (unsigned i = 0; i < a.d; ++i) r.c[i] = mod_q(a.c[i] - b.c[i], a.q);
  return r;
}

inline RingElement operator-(const RingElement& a) {
  RingElement r = a;
  for (unsigned i = 0; i < a.d; ++i) r.c[i] = mod_q(-a.c[i], a.q);
  return r;
}

// negacyclic schoolbook: X^d = -1
inline RingElement operator*(const RingElement& a, const RingElement& b) {
  check_same(a, b);
  RingElement r = ring_zero(a.d, a.q);
  std::vector<long> acc(a.d, 0);
  for (unsigned i = 0; i < a.d; ++i) {
    if (a.c[i] == 0) continue;
    for (unsigned j = 0; j < a.d; ++j) {
      unsigned idx = i + j;
      unsigned slot = idx < a.d ? idx : idx - a.d;
      long term = a.c[i] * b.c[j];
      acc[slot] += idx < a.d ? term : -term;
      acc[slot] %= a.q;  // keep the accumulator within one product of overflow
    }
  }
  for (unsigned i = 0; i < a.d; ++i) r.c[i] = mod_q(acc[i], a.q);
  return r;
}

inline RingElement scalar_mul(long s, const RingElement& a) {
  RingElement r = a;
  long sm = mod_q(s, a.q);
  for (unsigned i = 0; i < a.d; ++i) r.c[i] = mod_q(a.c[i] * sm, a.q);
  return r;
}

inline long centered_coeff(long v, long q) {
  long r = mod_q(v, q);
  return 2 * r > q ? r - q : r;
}

inline long inf_norm_centered(const RingElement& a) {
  long best = 0;
  for (long v : a.c) best = std::max(best, std::labs(centered_coeff(v, a.q)));
  return best;
}

// ------------------------------------------------------------ vector forms

using RingVec = std::vector<RingElement>;
using RingMat = std::vector<RingVec>;

inline RingVec ring_vec_zero(std::size_t n, unsigned d, long q) {
  return RingVec(n, ring_zero(d, q));
}

inline RingElement dot(const RingVec& a, const RingVec& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("ring dot: shape mismatch");
  RingElement s = ring_zero(a[0].d, a[0].q);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

inline RingVec vec_add(const RingVec& a, const RingVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ring vec_add: shape mismatch");
  RingVec r(a.size(), ring_zero(a[0].d, a[0].q));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RingVec vec_neg(const RingVec& a) {
  RingVec r = a;
  for (auto& e : r) e = -e;
  return r;
}

// row vector times matrix: out_j = sum_i row_i * M[i][j]
inline RingVec row_times_mat(const RingVec& row, const RingMat& M) {
  if (row.size() != M.size() || M.empty())
    throw std::invalid_argument("ring row_times_mat: shape mismatch");
  RingVec out(M[0].size(), ring_zero(row[0].d, row[0].q));
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (M[i].size() != M[0].size()) throw std::invalid_argument("ring: ragged matrix");
    for (std::size_t j = 0; j < M[i].size(); ++j) out[j] = out[j] + row[i] * M[i][j];
  }
  return out;
}

// matrix times column vector: out_i = sum_j M[i][j] * v_j
inline RingVec mat_times_col(const RingMat& M, const RingVec& v) {
  RingVec out(M.size(), ring_zero(v[0].d, v[0].q));
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (M[i].size() != v.size()) throw std::invalid_argument("ring mat_times_col: shape");
    for (std::size_t j = 0; j < v.size(); ++j) out[i] = out[i] + M[i][j] * v[j];
  }
  return out;
}

inline RingVec concat(const RingVec& a, const RingVec& b) {
  RingVec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

inline long inf_norm_centered(const RingVec& v) {
  long best = 0;
  for (const auto& e : v) best = std::max(best, inf_norm_centered(e));
  return best;
}

// --------------------------------------------------------------- sampling

inline RingElement uniform_element(unsigned d, long q, SeededRng& rng) {
  RingElement r = ring_zero(d, q);
  for (auto& v : r.c) v = rng.range_long(0, q - 1);
  return r;
}

inline RingElement ternary_element(unsigned d, long q, SeededRng& rng) {
  RingElement r = ring_zero(d, q);
  for (auto& v : r.c) v = mod_q(rng.range_long(-1, 1), q);
  return r;
}

// ---------------------------------------------------------------- hashing

// Uniform ring element from a domain-separated hash; coefficient i comes
// from hashing (data, i).
inline RingElement ring_hash(char tag, std::string_view data, unsigned d, long q) {
  RingElement r = ring_zero(d, q);
  for (unsigned i = 0; i < d; ++i) {
    std::string buf;
    hash_append(buf, data);
    hash_append(buf, static_cast<unsigned long>(i));
    r.c[i] = static_cast<long>(hash_to_range(tag, buf, q).get_ui());
  }
  return r;
}

// Binary-coefficient message encoding: bit stream of a digest over the bytes.
inline RingElement ring_message(std::string_view message, unsigned d, long q) {
  check_params(d, q);
  std::string buf;
  hash_append(buf, "msg");
  hash_append(buf, message);
  DigestStream stream('M', buf);
  RingElement r = ring_zero(d, q);
  for (auto& v : r.c) v = stream.next_bit() ? 1 : 0;
  return r;
}

}  // namespace bsw::ring
