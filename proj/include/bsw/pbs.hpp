#pragma once
// Blind-issuance algebra over R_q: BDLOP commitments, a TEST-MODE signer
// (keys are generated per session by sampling the short response first and
// publishing the matching target, because no real preimage sampler exists at
// this scale -- every algebraic identity is validated, no unforgeability is
// claimed), the two transformation identities between the blinded and
// unblinded statements, transparent revealed-witness verification, and the
// partially blind variant that shifts the target by a hash of the common
// message.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bsw/ring.hpp"
#include "bsw/serialize.hpp"

namespace bsw::pbs {

using ring::RingElement;
using ring::RingMat;
using ring::RingVec;

struct PbsParams {
  unsigned d = 0;
  long q = 0;
  unsigned k = 0;  // module rank: key rows, gadget length, randomness is k x k

  bool operator==(const PbsParams&) const = default;

  void validate() const {
    ring::check_params(d, q);
    if (k == 0) throw std::invalid_argument("pbs params: k must be positive");
  }

  // base-2^ceil(log2(q)/k) gadget vector (1, B, ..., B^(k-1))
  std::vector<long> gadget() const {
    unsigned lg = 0;
    while ((1L << lg) < q) ++lg;
    unsigned shift = (lg + k - 1) / k;
    std::vector<long> g(k);
    long B = 1L << shift;
    long cur = 1;
    for (unsigned i = 0; i < k; ++i) {
      g[i] = cur % q;
      cur *= B;
    }
    return g;
  }
};

inline PbsParams pbs_toy_params() {
  PbsParams p{8, 97, 2};
  p.validate();
  return p;
}

// ------------------------------------------------------------- commitments

struct CommitKey {
  PbsParams params;
  RingVec b0, b1;  // key rows, length k
};

inline CommitKey bdlop_keygen(const PbsParams& params, SeededRng& rng) {
  params.validate();
  CommitKey key{params, {}, {}};
  for (unsigned i = 0; i < params.k; ++i) {
    key.b0.push_back(ring::uniform_element(params.d, params.q, rng));
    key.b1.push_back(ring::uniform_element(params.d, params.q, rng));
  }
  return key;
}

struct BdlopCommitment {
  RingVec t0, t1;  // [t0; t1] = [b0; b1] R + [0; I*g]
};

inline RingVec gadget_times(const RingElement& I, const PbsParams& params) {
  RingVec out;
  for (long g : params.gadget()) out.push_back(ring::scalar_mul(g, I));
  return out;
}

inline RingMat ternary_matrix(unsigned k, unsigned d, long q, SeededRng& rng) {
  RingMat R(k, RingVec(k, ring::ring_zero(d, q)));
  for (auto& row : R)
    for (auto& e : row) e = ring::ternary_element(d, q, rng);
  return R;
}

inline BdlopCommitment bdlop_commit_with_randomness(const RingElement& I, const CommitKey& key,
                                                    const RingMat& R) {
  const PbsParams& P = key.params;
  if (I.d != P.d || I.q != P.q) throw std::invalid_argument("bdlop: message modulus mismatch");
  if (R.size() != P.k) throw std::invalid_argument("bdlop: randomness shape mismatch");
  for (const auto& row : R)
    if (row.size() != P.k) throw std::invalid_argument("bdlop: randomness shape mismatch");
  BdlopCommitment com;
  com.t0 = ring::row_times_mat(key.b0, R);
  com.t1 = ring::vec_add(ring::row_times_mat(key.b1, R), gadget_times(I, P));
  return com;
}

inline std::pair<BdlopCommitment, RingMat> bdlop_commit(const RingElement& I,
                                                        const CommitKey& key, SeededRng& rng) {
  RingMat R = ternary_matrix(key.params.k, key.params.d, key.params.q, rng);
  return {bdlop_commit_with_randomness(I, key, R), R};
}

inline bool bdlop_open_check(const BdlopCommitment& com, const RingElement& I, const RingMat& R,
                             const CommitKey& key) {
  if (I.d != key.params.d || I.q != key.params.q) return false;
  if (R.size() != key.params.k) return false;
  for (const auto& row : R) {
    if (row.size() != key.params.k) return false;
  }
  for (const auto& row : R)
    for (const auto& e : row)
      if (ring::inf_norm_centered(e) > 1) return false;  // randomness must be ternary
  BdlopCommitment expect = bdlop_commit_with_randomness(I, key, R);
  return expect.t0 == com.t0 && expect.t1 == com.t1;
}

// --------------------------------------------------------- test-mode keys

enum class GammaHash { real, zero_stub };

inline std::string t1_binding(const RingVec& t1) {
  std::string s;
  for (const auto& e : t1)
    for (long v : e.c) {
      s += std::to_string(v);
      s.push_back(' ');
    }
  return s;
}

// H_Mc: common-message hash into the ring; the zero stub reduces the partial
// scheme to the base scheme exactly.
inline RingElement gamma_hash(std::string_view gamma, const PbsParams& params, GammaHash mode) {
  if (mode == GammaHash::zero_stub) return ring::ring_zero(params.d, params.q);
  std::string buf;
  hash_append(buf, "Mc");
  hash_append(buf, gamma);
  return ring::ring_hash('M', buf, params.d, params.q);
}

struct IssuanceKeys {
  PbsParams params;
  RingVec a1, a2;  // public rows, length k
  RingElement u;   // public target
  // test-mode record: the short preimage this session will publish, the t1
  // the keys are bound to, and the common message baked into u
  RingVec e;  // length 2k, ternary
  std::string bound_t1;
  std::string gamma;
  GammaHash mode = GammaHash::real;

  bool operator==(const IssuanceKeys&) const = default;
};

// Blinded statement row [a1 | a2 + t1], length 2k.
inline RingVec blinded_statement(const IssuanceKeys& keys, const RingVec& t1) {
  RingVec st = keys.a1;
  for (unsigned i = 0; i < keys.params.k; ++i) st.push_back(keys.a2[i] + t1[i]);
  return st;
}

inline IssuanceKeys partial_issuance_keygen_testmode(const RingVec& t1, std::string_view gamma,
                                                     const PbsParams& params, SeededRng& rng,
                                                     GammaHash mode = GammaHash::real) {
  params.validate();
  if (t1.size() != params.k) throw std::invalid_argument("issuance keygen: t1 shape mismatch");
  IssuanceKeys keys;
  keys.params = params;
  for (unsigned i = 0; i < params.k; ++i) {
    keys.a1.push_back(ring::uniform_element(params.d, params.q, rng));
    keys.a2.push_back(ring::uniform_element(params.d, params.q, rng));
  }
  for (unsigned i = 0; i < 2 * params.k; ++i)
    keys.e.push_back(ring::ternary_element(params.d, params.q, rng));
  keys.bound_t1 = t1_binding(t1);
  keys.gamma = std::string(gamma);
  keys.mode = mode;
  // u = [a1 | a2 + t1] e^T + H_Mc(gamma); base scheme is the zero shift
  keys.u = ring::dot(blinded_statement(keys, t1), keys.e) + gamma_hash(gamma, params, mode);
  return keys;
}

inline IssuanceKeys issuance_keygen_testmode(const RingVec& t1, const PbsParams& params,
                                             SeededRng& rng) {
  return partial_issuance_keygen_testmode(t1, "", params, rng, GammaHash::zero_stub);
}

// The signer's move: publish the short e with [a1 | a2 + t1] e^T = u - H_Mc(gamma)
// (base scheme: zero shift). Test-mode keys must be bound to this t1/gamma.
inline RingVec partial_blind_issue_testmode(const RingVec& t1, std::string_view gamma,
                                            const IssuanceKeys& keys) {
  if (t1_binding(t1) != keys.bound_t1)
    throw std::logic_error("issuance: test-mode keys are bound to a different session t1");
  if (gamma != keys.gamma)
    throw std::logic_error("issuance: test-mode keys are bound to a different common message");
  RingElement target = keys.u - gamma_hash(gamma, keys.params, keys.mode);
  if (ring::dot(blinded_statement(keys, t1), keys.e) != target)
    throw std::logic_error("issuance: stored response does not satisfy the equation");
  if (ring::inf_norm_centered(keys.e) > 1)
    throw std::logic_error("issuance: stored response is not short");
  return keys.e;
}

inline RingVec issuance_sign_testmode(const RingVec& t1, const IssuanceKeys& keys) {
  return partial_blind_issue_testmode(t1, keys.gamma, keys);
}

// ------------------------------------------------------------- unblinding

struct BlindIssuanceBundle {
  PbsParams params;
  RingVec statement;  // [a1 | a2 + I*g | b1], length 3k
  RingVec witness;    // [e1 | e2 | R e2^T], length 3k
  long norm_bound = 0;
};

// Default witness bound: the R e2^T block is a k-term sum of ternary*ternary
// ring products, so honest coefficients stay within k*d.
inline long default_norm_bound(const PbsParams& P) {
  return static_cast<long>(P.k) * static_cast<long>(P.d);
}

// Rewrites the signer equation on the blinded statement into the unblinded
// statement, and cross-checks the reverse-direction identity (which carries
// the opposite sign on the R e2^T block).
inline BlindIssuanceBundle unblind_transform(const RingVec& e, const BdlopCommitment& com,
                                             const RingMat& R, const RingElement& I,
                                             const IssuanceKeys& keys, const CommitKey& ckey) {
  const PbsParams& P = keys.params;
  if (e.size() != 2 * P.k) throw std::invalid_argument("unblind: response shape mismatch");
  if (!bdlop_open_check(com, I, R, ckey))
    throw std::invalid_argument("unblind: commitment does not open to (I, R)");
  RingElement target = keys.u - gamma_hash(keys.gamma, P, keys.mode);
  if (ring::dot(blinded_statement(keys, com.t1), e) != target)
    throw std::invalid_argument("unblind: response fails the signer equation");

  RingVec e2(e.begin() + P.k, e.end());
  RingVec Re2 = ring::mat_times_col(R, e2);

  BlindIssuanceBundle bundle;
  bundle.params = P;
  bundle.statement = keys.a1;
  RingVec Ig = gadget_times(I, P);
  for (unsigned i = 0; i < P.k; ++i) bundle.statement.push_back(keys.a2[i] + Ig[i]);
  for (unsigned i = 0; i < P.k; ++i) bundle.statement.push_back(ckey.b1[i]);
  bundle.witness = ring::concat(e, Re2);
  bundle.norm_bound = default_norm_bound(P);

  // forward identity: unblinded statement . witness = blinded statement . e
  if (ring::dot(bundle.statement, bundle.witness) != target)
    throw std::logic_error("unblind: forward transformation identity failed");
  // reverse identity: [a1 | a2 + I*g] e^T = [a1 | a2 + t1 | b1] [e^T; -R e2^T]
  RingVec unblinded_2k = keys.a1;
  for (unsigned i = 0; i < P.k; ++i) unblinded_2k.push_back(keys.a2[i] + Ig[i]);
  RingVec rev_statement = blinded_statement(keys, com.t1);
  for (unsigned i = 0; i < P.k; ++i) rev_statement.push_back(ckey.b1[i]);
  RingVec rev_witness = ring::concat(e, ring::vec_neg(Re2));
  if (ring::dot(unblinded_2k, e) != ring::dot(rev_statement, rev_witness))
    throw std::logic_error("unblind: reverse transformation identity failed");
  return bundle;
}

// -------------------------------------------------------------- verifying

inline bool transparent_verify(const BlindIssuanceBundle& bundle, const RingElement& u,
                               long norm_bound) {
  if (bundle.statement.size() != bundle.witness.size() || bundle.statement.empty()) return false;
  if (ring::dot(bundle.statement, bundle.witness) != u) return false;
  return ring::inf_norm_centered(bundle.witness) <= norm_bound;
}

// Partially blind variant: the target is recomputed from gamma, binding the
// bundle to the common message.
inline bool transparent_verify_gamma(const BlindIssuanceBundle& bundle, const RingElement& u,
                                     std::string_view gamma, long norm_bound,
                                     GammaHash mode = GammaHash::real) {
  RingElement target = u - gamma_hash(gamma, bundle.params, mode);
  return transparent_verify(bundle, target, norm_bound);
}

// ---------------------------------------------------------------- file io

inline const std::string kBundleHeader = "pbs-bundle v1";

inline void write_bundle(const std::string& path, const BlindIssuanceBundle& bundle) {
  std::vector<std::string> lines;
  lines.push_back(std::to_string(bundle.params.d) + " " + std::to_string(bundle.params.q) + " " +
                  std::to_string(bundle.params.k) + " " + std::to_string(bundle.norm_bound));
  auto push_vec = [&](const RingVec& v) {
    for (const auto& e : v) {
      std::string row;
      for (unsigned i = 0; i < e.d; ++i) {
        if (i) row.push_back(' ');
        row += std::to_string(e.c[i]);
      }
      lines.push_back(row);
    }
  };
  push_vec(bundle.statement);
  push_vec(bundle.witness);
  write_text_file(path, kBundleHeader, lines);
}

inline BlindIssuanceBundle read_bundle(const std::string& path) {
  auto lines = read_text_file(path, kBundleHeader);
  if (lines.empty()) throw std::runtime_error("pbs bundle: missing parameter line");
  auto head = parse_mpz_row(lines[0]);
  if (head.size() != 4) throw std::runtime_error("pbs bundle: bad parameter line");
  BlindIssuanceBundle bundle;
  bundle.params.d = static_cast<unsigned>(head[0].get_ui());
  bundle.params.q = head[1].get_si();
  bundle.params.k = static_cast<unsigned>(head[2].get_ui());
  bundle.params.validate();
  bundle.norm_bound = head[3].get_si();
  std::size_t rows = lines.size() - 1;
  if (rows != 6 * bundle.params.k) throw std::runtime_error("pbs bundle: wrong row count");
  auto parse_elem = [&](const std::string& line) {
    auto vals = parse_mpz_row(line);
    if (vals.size() != bundle.params.d) throw std::runtime_error("pbs bundle: bad row width");
    RingElement e = ring::ring_zero(bundle.params.d, bundle.params.q);
    for (unsigned i = 0; i < bundle.params.d; ++i)
      e.c[i] = ring::mod_q(vals[i].get_si(), bundle.params.q);
    return e;
  };
  for (std::size_t i = 0; i < 3 * bundle.params.k; ++i)
    bundle.statement.push_back(parse_elem(lines[1 + i]));
  for (std::size_t i = 0; i < 3 * bundle.params.k; ++i)
    bundle.witness.push_back(parse_elem(lines[1 + 3 * bundle.params.k + i]));
  return bundle;
}

}  // namespace bsw::pbs
