#pragma once
// Interactive blind-signature protocols as explicit session state machines:
// naive RSA blinding with its two classic attacks (kept as executable
// demonstrations of why hashing is needed), RSA-FDH blind signing, and blind
// Schnorr. Sessions enforce strict message order and single use; signers keep
// an append-only transcript ledger so one-more accounting can be audited.

#include <gmpxx.h>

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bsw/classic_sig.hpp"
#include "bsw/core_math.hpp"
#include "bsw/hash.hpp"
#include "bsw/rng.hpp"

namespace bsw {

struct session_error : std::logic_error {
  using std::logic_error::logic_error;
};

// ------------------------------------------------ naive RSA demonstrations

struct NaiveBlindResult {
  mpz_class m_blinded;  // m * r^e mod n, the only value the signer sees
  mpz_class s_blinded;  // (m')^d mod n
  mpz_class s;          // s' * r^-1 = m^d mod n
};

inline NaiveBlindResult rsa_naive_blind_demo(const mpz_class& m, const mpz_class& r,
                                             const RsaKeyPair& key) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), key.n.get_mpz_t());
  if (g != 1) throw std::invalid_argument("naive blind: r not coprime to n");
  NaiveBlindResult out;
  out.m_blinded = mod_reduce(m * mod_exp(r, key.e, key.n), key.n);
  out.s_blinded = mod_exp(out.m_blinded, key.d, key.n);
  out.s = mod_reduce(out.s_blinded * mod_inv(r, key.n), key.n);
  return out;
}

using RawSignOracle = std::function<mpz_class(const mpz_class&)>;

inline mpz_class sample_unit(const mpz_class& n, SeededRng& rng) {
  while (true) {
    mpz_class r = rng.range(1, n - 1);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return r;
  }
}

// Decryption through the signing oracle: c = m^e is re-blinded as c*r^e, the
// signer "signs" it, and s'*r^-1 = c^d = m.
inline mpz_class rsa_naive_decrypt_attack(const mpz_class& c, const RawSignOracle& sign_blinded,
                                          const RsaPublicKey& pub, SeededRng& rng) {
  mpz_class r = sample_unit(pub.n, rng);
  mpz_class c_blinded = mod_reduce(c * mod_exp(r, pub.e, pub.n), pub.n);
  mpz_class s_blinded = sign_blinded(c_blinded);
  return mod_reduce(s_blinded * mod_inv(r, pub.n), pub.n);
}

// Multiplicative forgery: signatures on m1 and m*m1^-1 multiply to one on m.
// m itself is never queried (guaranteed when m1 is sampled here; callers
// forcing m1 take responsibility for the query log).
inline mpz_class rsa_naive_multiplicative_forgery(const mpz_class& m,
                                                  const RawSignOracle& sign_raw,
                                                  const RsaPublicKey& pub, SeededRng& rng,
                                                  std::optional<mpz_class> forced_m1 = {}) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), pub.n.get_mpz_t());
  if (g != 1) throw std::invalid_argument("forgery: m not invertible mod n");
  mpz_class m1, m2;
  if (forced_m1) {
    m1 = *forced_m1;
    m2 = mod_reduce(m * mod_inv(m1, pub.n), pub.n);
  } else {
    do {
      m1 = sample_unit(pub.n, rng);
      m2 = mod_reduce(m * mod_inv(m1, pub.n), pub.n);
    } while (m1 == m || m2 == m);
  }
  return mod_reduce(sign_raw(m1) * sign_raw(m2), pub.n);
}

// ------------------------------------------------ RSA-FDH blind sessions

class RsaFdhSigner {
 public:
  explicit RsaFdhSigner(RsaKeyPair key) : key_(std::move(key)) { key_.validate(); }

  struct Transcript {
    std::size_t id;
    mpz_class m_blinded, s_blinded;
  };

  mpz_class sign_blinded(const mpz_class& m_blinded) {
    std::lock_guard<std::mutex> lock(mu_);
    mpz_class s = mod_exp(m_blinded, key_.d, key_.n);
    ledger_.push_back({ledger_.size(), m_blinded, s});
    return s;
  }

  RsaPublicKey public_key() const { return {key_.e, key_.n}; }
  const RsaKeyPair& key() const { return key_; }

  std::size_t issued() const {
    std::lock_guard<std::mutex> lock(mu_);
    return ledger_.size();
  }
  std::vector<Transcript> ledger() const {
    std::lock_guard<std::mutex> lock(mu_);
    return ledger_;
  }

 private:
  RsaKeyPair key_;
  std::vector<Transcript> ledger_;
  mutable std::mutex mu_;
};

class RsaBlindUserSession {
 public:
  RsaBlindUserSession(RsaPublicKey pub, std::string message)
      : pub_(std::move(pub)), message_(std::move(message)) {}

  // step 1: blind H(m) with a fresh unit r; m' is the only outbound value
  mpz_class blind(SeededRng& rng) {
    if (state_ != State::Start) throw session_error("rsa blind session: blind() out of order");
    h_ = rsa_message_rep(message_, pub_.n);
    r_ = sample_unit(pub_.n, rng);
    m_blinded_ = mod_reduce(h_ * mod_exp(r_, pub_.e, pub_.n), pub_.n);
    state_ = State::Blinded;
    return m_blinded_;
  }

  // step 2: unblind and verify; throws if the signer response is invalid
  mpz_class unblind(const mpz_class& s_blinded) {
    if (state_ != State::Blinded)
      throw session_error("rsa blind session: unblind() out of order");
    mpz_class s = mod_reduce(s_blinded * mod_inv(r_, pub_.n), pub_.n);
    if (!rsa_verify_raw(h_, s, pub_))
      throw std::runtime_error("rsa blind session: unblinded signature invalid");
    state_ = State::Done;
    return s;
  }

  const std::string& message() const { return message_; }

 private:
  enum class State { Start, Blinded, Done };
  State state_ = State::Start;
  RsaPublicKey pub_;
  std::string message_;
  mpz_class h_, r_, m_blinded_;
};

struct RsaBlindOutput {
  std::string message;
  mpz_class signature;
  std::size_t transcript_id;
  std::string gamma;  // attribute tag for partially blind issues, else empty
};

inline RsaBlindOutput rsa_fdh_blind_run(std::string_view m, RsaFdhSigner& signer,
                                        SeededRng& rng) {
  RsaBlindUserSession user(signer.public_key(), std::string(m));
  mpz_class m_blinded = user.blind(rng);
  std::size_t tid = signer.issued();
  mpz_class s_blinded = signer.sign_blinded(m_blinded);
  return {std::string(m), user.unblind(s_blinded), tid, ""};
}

inline RsaBlindOutput rsa_fdh_blind_run(std::string_view m, const RsaKeyPair& key,
                                        SeededRng& rng) {
  RsaFdhSigner signer(key);
  return rsa_fdh_blind_run(m, signer, rng);
}

// ------------------------------------------------ blind Schnorr sessions

class SchnorrBlindSigner {
 public:
  explicit SchnorrBlindSigner(SchnorrKeyPair key) : key_(std::move(key)) { key_.validate(); }

  struct Transcript {
    std::size_t id;
    mpz_class R, c, s;
    bool completed = false;
  };

  std::size_t open_session(SeededRng& rng) {
    std::lock_guard<std::mutex> lock(mu_);
    mpz_class r = rng.below(key_.group.q);
    std::size_t sid = ledger_.size();
    ledger_.push_back({sid, mod_exp(key_.group.g, r, key_.group.p), 0, 0, false});
    nonces_.push_back(r);
    return sid;
  }

  mpz_class commitment(std::size_t sid) const {
    std::lock_guard<std::mutex> lock(mu_);
    check_sid(sid);
    return ledger_[sid].R;
  }

  // single use: a second respond() on the same session is a state error
  mpz_class respond(std::size_t sid, const mpz_class& c) {
    std::lock_guard<std::mutex> lock(mu_);
    check_sid(sid);
    if (ledger_[sid].completed) throw session_error("schnorr signer: session already answered");
    const auto& G = key_.group;
    mpz_class s = mod_reduce(nonces_[sid] + mod_reduce(c, G.q) * key_.x, G.q);
    ledger_[sid].c = mod_reduce(c, G.q);
    ledger_[sid].s = s;
    ledger_[sid].completed = true;
    nonces_[sid] = 0;
    return s;
  }

  SchnorrPublicKey public_key() const { return {key_.group, key_.X}; }
  const SchnorrGroup& group() const { return key_.group; }

  std::size_t responses_issued() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t n = 0;
    for (const auto& t : ledger_) n += t.completed ? 1 : 0;
    return n;
  }
  std::vector<Transcript> ledger() const {
    std::lock_guard<std::mutex> lock(mu_);
    return ledger_;
  }

 private:
  void check_sid(std::size_t sid) const {
    if (sid >= ledger_.size()) throw session_error("schnorr signer: unknown session");
  }

  SchnorrKeyPair key_;
  std::vector<Transcript> ledger_;
  std::vector<mpz_class> nonces_;
  mutable std::mutex mu_;
};

class SchnorrBlindUserSession {
 public:
  SchnorrBlindUserSession(SchnorrPublicKey pub, std::string message)
      : pub_(std::move(pub)), message_(std::move(message)) {}

  // step 1: blind the commitment, derive the challenge to send
  mpz_class challenge(const mpz_class& R, SeededRng& rng) {
    return challenge_with_factors(R, rng.below(pub_.group.q), rng.below(pub_.group.q));
  }

  // alpha = beta = 0 degenerates to a plain Schnorr signature
  mpz_class challenge_with_factors(const mpz_class& R, const mpz_class& alpha,
                                   const mpz_class& beta) {
    if (state_ != State::Start)
      throw session_error("schnorr blind session: challenge() out of order");
    const auto& G = pub_.group;
    alpha_ = mod_reduce(alpha, G.q);
    beta_ = mod_reduce(beta, G.q);
    R_blinded_ = mod_reduce(R * mod_exp(G.g, alpha_, G.p) % G.p * mod_exp(pub_.X, beta_, G.p), G.p);
    c_local_ = schnorr_challenge(R_blinded_, message_, G.q);
    c_sent_ = mod_reduce(c_local_ + beta_, G.q);
    state_ = State::Challenged;
    return c_sent_;
  }

  // step 2: unblind the response; verifies g^{s'} = R' * X^{c'}
  SchnorrSignature finish(const mpz_class& s) {
    if (state_ != State::Challenged)
      throw session_error("schnorr blind session: finish() out of order");
    const auto& G = pub_.group;
    SchnorrSignature sig{R_blinded_, mod_reduce(s + alpha_, G.q)};
    if (!schnorr_verify(message_, sig, pub_))
      throw std::runtime_error("schnorr blind session: signer response invalid");
    state_ = State::Done;
    return sig;
  }

  const mpz_class& sent_challenge() const { return c_sent_; }
  const std::string& message() const { return message_; }

 private:
  enum class State { Start, Challenged, Done };
  State state_ = State::Start;
  SchnorrPublicKey pub_;
  std::string message_;
  mpz_class alpha_, beta_, R_blinded_, c_local_, c_sent_;
};

struct SchnorrBlindOutput {
  std::string message;
  SchnorrSignature signature;
  std::size_t transcript_id;
};

inline SchnorrBlindOutput schnorr_blind_run(std::string_view m, SchnorrBlindSigner& signer,
                                            SeededRng& rng) {
  SchnorrBlindUserSession user(signer.public_key(), std::string(m));
  std::size_t sid = signer.open_session(rng);
  mpz_class c = user.challenge(signer.commitment(sid), rng);
  SchnorrSignature sig = user.finish(signer.respond(sid, c));
  return {std::string(m), sig, sid};
}

inline SchnorrBlindOutput schnorr_blind_run(std::string_view m, const SchnorrKeyPair& key,
                                            SeededRng& rng) {
  SchnorrBlindSigner signer(key);
  return schnorr_blind_run(m, signer, rng);
}

// Perfect-blindness witness: the unique (alpha, beta) linking a signer view
// (R, c, s) to a message-signature pair. Consistent iff R' = R g^alpha X^beta,
// which for honest transcripts holds exactly when the pair is a valid
// signature, so every valid pair matches every transcript.
inline bool blindness_witness_schnorr(const SchnorrBlindSigner::Transcript& view,
                                      std::string_view m, const SchnorrSignature& sig,
                                      const SchnorrPublicKey& pub) {
  const auto& G = pub.group;
  mpz_class alpha = mod_reduce(sig.s - view.s, G.q);
  mpz_class beta = mod_reduce(view.c - schnorr_challenge(sig.R, m, G.q), G.q);
  mpz_class rhs =
      mod_reduce(view.R * mod_exp(G.g, alpha, G.p) % G.p * mod_exp(pub.X, beta, G.p), G.p);
  return sig.R == rhs;
}

// RSA analogue: the unique unit r linking a signer view (m', s') to a
// message-signature pair is r = s'/s mod n; the view is consistent iff
// m' = H(m) r^e, which, as with Schnorr, holds for every valid pair against
// every honest view (perfect blindness).
inline bool blindness_witness_rsa(const RsaFdhSigner::Transcript& view, std::string_view m,
                                  const mpz_class& s, const RsaPublicKey& pub) {
  if (!rsa_verify(m, s, pub)) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), s.get_mpz_t(), pub.n.get_mpz_t());
  if (g != 1) return false;
  mpz_class r = mod_reduce(view.s_blinded * mod_inv(s, pub.n), pub.n);
  return view.m_blinded == mod_reduce(rsa_message_rep(m, pub.n) * mod_exp(r, pub.e, pub.n), pub.n);
}

// ------------------------------------------------ partially blind issuance

// Per-attribute independent keys: the attribute string gamma (denomination,
// expiry, ...) selects which RSA key signs, and verification must look the
// key up under the same gamma.
class AttributeKeyRing {
 public:
  AttributeKeyRing(unsigned bits_per_prime, mpz_class e, SeededRng rng)
      : bits_(bits_per_prime), e_(std::move(e)), rng_(rng) {}

  const RsaKeyPair& register_attribute(const std::string& gamma) {
    auto it = keys_.find(gamma);
    if (it != keys_.end()) return it->second;
    return keys_.emplace(gamma, rsa_keygen(bits_, e_, rng_)).first->second;
  }

  bool has(const std::string& gamma) const { return keys_.count(gamma) != 0; }

  const RsaKeyPair& key_for(const std::string& gamma) const {
    auto it = keys_.find(gamma);
    if (it == keys_.end()) throw std::invalid_argument("key ring: unknown attribute " + gamma);
    return it->second;
  }

  RsaPublicKey public_key_for(const std::string& gamma) const {
    const auto& k = key_for(gamma);
    return {k.e, k.n};
  }

  std::vector<std::string> attributes() const {
    std::vector<std::string> out;
    for (const auto& [g, k] : keys_) out.push_back(g);
    return out;
  }

 private:
  unsigned bits_;
  mpz_class e_;
  SeededRng rng_;
  std::map<std::string, RsaKeyPair> keys_;
};

inline RsaBlindOutput partial_blind_issue(std::string_view m, const std::string& gamma,
                                          AttributeKeyRing& ring, SeededRng& rng) {
  RsaBlindOutput out = rsa_fdh_blind_run(m, ring.key_for(gamma), rng);
  out.gamma = gamma;
  return out;
}

inline bool verify_partial_blind(std::string_view m, const mpz_class& s, const std::string& gamma,
                                 const AttributeKeyRing& ring) {
  return rsa_verify(m, s, ring.public_key_for(gamma));
}

// One-more baseline: an honest user gets exactly one signature per completed
// session, so more distinct valid signatures than responses is a violation.
inline bool one_more_violation(std::size_t responses_issued, std::size_t distinct_valid) {
  return distinct_valid > responses_issued;
}

// ------------------------------------------------ transcript export

inline std::vector<std::string> export_transcript(const SchnorrBlindSigner::Transcript& t) {
  std::vector<std::string> lines{"S->U commit " + t.R.get_str()};
  if (t.completed) {
    lines.push_back("U->S challenge " + t.c.get_str());
    lines.push_back("S->U response " + t.s.get_str());
  }
  return lines;
}

inline std::vector<std::string> export_transcript(const RsaFdhSigner::Transcript& t) {
  return {"U->S blinded " + t.m_blinded.get_str(), "S->U signed " + t.s_blinded.get_str()};
}

}  // namespace bsw
