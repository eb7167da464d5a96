#pragma once
// Fiat-Shamir-with-aborts signature over plain Z_q matrices: secrets are
// short n x kc and m x kc matrices, the challenge is a weight-w vector in
// {-1,0,1}^kc, and signing rejection-samples until the response is short and
// the High decomposition of the verifier-side recomputation agrees with the
// signer's commitment. A third, signer-side restart (High agreement) stands
// in for the hint mechanism, so every emitted signature verifies; keygen
// rejects parameter sets whose analytic High-flip rate reaches 1%.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bsw/core_math.hpp"
#include "bsw/hash.hpp"
#include "bsw/lattice.hpp"
#include "bsw/rng.hpp"
#include "bsw/serialize.hpp"

namespace bsw::fs {

using lat::ZMat;
using lat::ZVec;

struct params_infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FsParams {
  std::size_t n = 0;   // response length; A is m x n
  std::size_t m = 0;   // commitment length
  std::size_t kc = 0;  // challenge vector length
  mpz_class q;
  mpz_class eta;    // secret coefficient bound
  mpz_class gamma;  // mask bound, y uniform on [-gamma, gamma]
  mpz_class beta;   // rejection margin
  unsigned w = 0;   // challenge weight (number of +-1 entries)
  unsigned D = 0;   // decomposition splits off 2^D low bits

  bool operator==(const FsParams&) const = default;

  void validate() const {
    if (n == 0 || m == 0 || kc == 0) throw std::invalid_argument("fs params: empty dimensions");
    if (w == 0 || w > kc) throw std::invalid_argument("fs params: challenge weight out of range");
    if (eta < 1) throw std::invalid_argument("fs params: eta must be positive");
    if (!(gamma > beta && beta > 0)) throw std::invalid_argument("fs params: need gamma > beta > 0");
    if (q <= 4 * gamma) throw std::invalid_argument("fs params: need q > 4*gamma");
    if (D == 0 || D >= bitlen(q)) throw std::invalid_argument("fs params: bad decomposition size");
    // analytic High-flip rate: m coordinates, each flips with probability
    // <= 2*w*eta / 2^D; reject once the expected rate reaches 1%
    mpz_class flips = 200 * static_cast<unsigned long>(m) * w * eta;
    if (flips >= (mpz_class(1) << D))
      throw std::invalid_argument("fs params: High-agreement failure rate reaches 1%");
  }
};

inline FsParams fs_toy_params() {
  FsParams p;
  p.n = 8;
  p.m = 8;
  p.kc = 8;
  p.q = 8380417;
  p.eta = 2;
  p.gamma = mpz_class(1) << 17;
  p.w = 4;
  p.beta = p.eta * p.w;  // max infinity norm of s1*c
  p.D = 15;
  p.validate();
  return p;
}

// --------------------------------------------------------- High/Low split

// v = High * 2^D + Low with Low centered in (-2^(D-1), 2^(D-1)]; exact.
inline std::pair<mpz_class, mpz_class> highlow(const mpz_class& v, unsigned D) {
  mpz_class twoD = mpz_class(1) << D;
  mpz_class low = mod_reduce(v, twoD);
  if (2 * low > twoD) low -= twoD;
  return {(v - low) >> D, low};
}

inline ZVec high_bits(const ZVec& v, unsigned D) {
  ZVec h(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) h[i] = highlow(v[i], D).first;
  return h;
}

inline ZVec low_bits(const ZVec& v, unsigned D) {
  ZVec l(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) l[i] = highlow(v[i], D).second;
  return l;
}

inline mpz_class inf_norm(const ZVec& v) {
  mpz_class best = 0;
  for (const auto& x : v) {
    mpz_class a = abs(x);
    if (a > best) best = a;
  }
  return best;
}

inline mpz_class inf_norm(const ZMat& M) {
  mpz_class best = 0;
  for (const auto& r : M) {
    mpz_class a = inf_norm(r);
    if (a > best) best = a;
  }
  return best;
}

// ------------------------------------------------------------------ keys

struct FsPublicKey {
  FsParams params;
  ZMat A;  // m x n over Z_q
  ZMat t;  // m x kc over Z_q, t = A*s1 + s2
};

struct FsKeyPair {
  FsParams params;
  ZMat A;
  ZMat s1;  // n x kc, entries in [-eta, eta]
  ZMat s2;  // m x kc, entries in [-eta, eta]
  ZMat t;

  FsPublicKey public_key() const { return {params, A, t}; }

  void validate() const {
    params.validate();
    if (inf_norm(s1) > params.eta || inf_norm(s2) > params.eta)
      throw std::invalid_argument("fs key: secret out of range");
    ZMat expect = lat::mat_mul(A, s1);
    for (std::size_t i = 0; i < params.m; ++i)
      for (std::size_t j = 0; j < params.kc; ++j)
        if (mod_reduce(expect[i][j] + s2[i][j], params.q) != t[i][j])
          throw std::invalid_argument("fs key: t != A*s1 + s2");
  }
};

inline ZMat random_mod_matrix(std::size_t rows, std::size_t cols, const mpz_class& q,
                              SeededRng& rng) {
  ZMat M(rows, ZVec(cols));
  for (auto& r : M)
    for (auto& v : r) v = rng.below(q);
  return M;
}

inline ZMat random_short_matrix(std::size_t rows, std::size_t cols, const mpz_class& bound,
                                SeededRng& rng) {
  ZMat M(rows, ZVec(cols));
  for (auto& r : M)
    for (auto& v : r) v = rng.range(-bound, bound);
  return M;
}

inline FsKeyPair fs_keygen(const FsParams& params, SeededRng& rng) {
  params.validate();
  FsKeyPair k;
  k.params = params;
  k.A = random_mod_matrix(params.m, params.n, params.q, rng);
  k.s1 = random_short_matrix(params.n, params.kc, params.eta, rng);
  k.s2 = random_short_matrix(params.m, params.kc, params.eta, rng);
  ZMat As1 = lat::mat_mul(k.A, k.s1);
  k.t = ZMat(params.m, ZVec(params.kc));
  for (std::size_t i = 0; i < params.m; ++i)
    for (std::size_t j = 0; j < params.kc; ++j)
      k.t[i][j] = mod_reduce(As1[i][j] + k.s2[i][j], params.q);
  return k;
}

// --------------------------------------------------------------- challenge

// Weight-w vector in {-1,0,1}^kc decoded from a domain-separated digest
// stream over (High bits, message); deterministic.
inline ZVec fs_challenge(const ZVec& high, std::string_view message, const FsParams& params) {
  std::string buf;
  for (const auto& h : high) hash_append(buf, h);
  hash_append(buf, message);
  DigestStream stream('W', buf);
  ZVec c(params.kc, 0);
  unsigned placed = 0;
  while (placed < params.w) {
    unsigned pos = stream.next_below(static_cast<unsigned>(params.kc));
    if (c[pos] != 0) continue;
    c[pos] = stream.next_bit() ? 1 : -1;
    ++placed;
  }
  return c;
}

inline bool challenge_well_formed(const ZVec& c, const FsParams& params) {
  if (c.size() != params.kc) return false;
  unsigned weight = 0;
  for (const auto& v : c) {
    if (v != -1 && v != 0 && v != 1) return false;
    if (v != 0) ++weight;
  }
  return weight == params.w;
}

// ----------------------------------------------------------------- signing

struct FsSignature {
  ZVec z;  // length n, ||z||_inf <= gamma - beta
  ZVec c;  // length kc, weight w, entries in {-1,0,1}
};

struct FsSignResult {
  FsSignature sig;
  unsigned attempts = 0;       // total loop iterations, >= 1
  unsigned high_restarts = 0;  // restarts caused by High disagreement alone
};

inline ZVec mat_vec(const ZMat& M, const ZVec& v) {
  ZVec out(M.size(), 0);
  for (std::size_t i = 0; i < M.size(); ++i) out[i] = lat::dot(M[i], v);
  return out;
}

inline ZVec mat_vec_mod(const ZMat& M, const ZVec& v, const mpz_class& q) {
  ZVec out = mat_vec(M, v);
  for (auto& x : out) x = mod_reduce(x, q);
  return out;
}

inline FsSignResult fs_sign(std::string_view message, const FsKeyPair& key, SeededRng& rng,
                            unsigned max_attempts = 10000) {
  const FsParams& P = key.params;
  mpz_class margin = P.gamma - P.beta;
  FsSignResult res;
  while (res.attempts < max_attempts) {
    ++res.attempts;
    ZVec y(P.n);
    for (auto& v : y) v = rng.range(-P.gamma, P.gamma);
    ZVec wv = mat_vec_mod(key.A, y, P.q);
    ZVec wv_high = high_bits(wv, P.D);
    ZVec c = fs_challenge(wv_high, message, P);

    ZVec z = y;
    ZVec s1c = mat_vec(key.s1, c);
    for (std::size_t i = 0; i < P.n; ++i) z[i] += s1c[i];
    if (inf_norm(z) > margin) continue;

    ZVec s2c = mat_vec(key.s2, c);
    ZVec u(P.m);
    for (std::size_t i = 0; i < P.m; ++i) u[i] = mod_reduce(wv[i] - s2c[i], P.q);
    if (inf_norm(low_bits(u, P.D)) > margin) continue;
    if (high_bits(u, P.D) != wv_high) {
      ++res.high_restarts;
      continue;
    }
    res.sig = {std::move(z), std::move(c)};
    return res;
  }
  throw params_infeasible("fs_sign: attempt limit exceeded");
}

inline bool fs_verify(std::string_view message, const FsSignature& sig, const FsPublicKey& pub) {
  const FsParams& P = pub.params;
  if (sig.z.size() != P.n) return false;
  if (!challenge_well_formed(sig.c, P)) return false;
  if (inf_norm(sig.z) > P.gamma - P.beta) return false;
  ZVec az = mat_vec(pub.A, sig.z);
  ZVec tc = mat_vec(pub.t, sig.c);
  ZVec u(P.m);
  for (std::size_t i = 0; i < P.m; ++i) u[i] = mod_reduce(az[i] - tc[i], P.q);
  return fs_challenge(high_bits(u, P.D), message, P) == sig.c;
}

// ---------------------------------------------------------------- file io

inline const std::string kFsKeyHeader = "fs-key v1";
inline const std::string kFsSigHeader = "fs-sig v1";

inline std::string format_params(const FsParams& P) {
  ZVec row = {mpz_class(static_cast<unsigned long>(P.n)),
              mpz_class(static_cast<unsigned long>(P.m)),
              mpz_class(static_cast<unsigned long>(P.kc)),
              P.q,
              P.eta,
              P.gamma,
              P.beta,
              mpz_class(P.w),
              mpz_class(P.D)};
  return format_mpz_row(row);
}

inline FsParams parse_params(const std::string& line) {
  ZVec row = parse_mpz_row(line);
  if (row.size() != 9) throw std::runtime_error("fs params line: expected 9 fields");
  FsParams P;
  P.n = row[0].get_ui();
  P.m = row[1].get_ui();
  P.kc = row[2].get_ui();
  P.q = row[3];
  P.eta = row[4];
  P.gamma = row[5];
  P.beta = row[6];
  P.w = static_cast<unsigned>(row[7].get_ui());
  P.D = static_cast<unsigned>(row[8].get_ui());
  P.validate();
  return P;
}

// Key file: params line, m rows of A, m rows of t, then (secret keys only)
// n rows of s1 and m rows of s2.
inline void write_fs_key(const std::string& path, const FsKeyPair& key,
                         bool include_secret = true) {
  std::vector<std::string> lines{format_params(key.params)};
  for (const auto& r : key.A) lines.push_back(format_mpz_row(r));
  for (const auto& r : key.t) lines.push_back(format_mpz_row(r));
  if (include_secret) {
    for (const auto& r : key.s1) lines.push_back(format_mpz_row(r));
    for (const auto& r : key.s2) lines.push_back(format_mpz_row(r));
  }
  write_text_file(path, kFsKeyHeader, lines);
}

// Returns the key and whether the secret half was present.
inline std::pair<FsKeyPair, bool> read_fs_key(const std::string& path) {
  auto lines = read_text_file(path, kFsKeyHeader);
  if (lines.empty()) throw std::runtime_error("fs key file: missing params");
  FsKeyPair key;
  key.params = parse_params(lines[0]);
  std::size_t n = key.params.n, m = key.params.m;
  std::size_t pub_lines = 1 + 2 * m;
  std::size_t all_lines = pub_lines + n + m;
  if (lines.size() != pub_lines && lines.size() != all_lines)
    throw std::runtime_error("fs key file: wrong line count");
  auto take = [&](std::size_t start, std::size_t count, std::size_t width) {
    ZMat M;
    for (std::size_t i = 0; i < count; ++i) {
      M.push_back(parse_mpz_row(lines[start + i]));
      if (M.back().size() != width) throw std::runtime_error("fs key file: bad row width");
    }
    return M;
  };
  key.A = take(1, m, key.params.n);
  key.t = take(1 + m, m, key.params.kc);
  bool secret = lines.size() == all_lines;
  if (secret) {
    key.s1 = take(pub_lines, n, key.params.kc);
    key.s2 = take(pub_lines + n, m, key.params.kc);
    key.validate();
  }
  return {key, secret};
}

inline void write_fs_sig(const std::string& path, const FsSignature& sig) {
  write_text_file(path, kFsSigHeader, {format_mpz_row(sig.z), format_mpz_row(sig.c)});
}

inline FsSignature read_fs_sig(const std::string& path) {
  auto lines = read_text_file(path, kFsSigHeader);
  if (lines.size() != 2) throw std::runtime_error("fs sig file: expected two rows");
  return {parse_mpz_row(lines[0]), parse_mpz_row(lines[1])};
}

}  // namespace bsw::fs
