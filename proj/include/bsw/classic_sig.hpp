#pragma once
// Textbook RSA, DSA, and Schnorr signatures. The discrete-log schemes live in
// a Schnorr subgroup of Z_p^* (multiplicative form of the additive notation:
// xG becomes g^x, sG = R + cX becomes g^s = R * X^c). Challenges and message
// hashes land in [0, q) via hash_to_range; s is reduced mod q throughout.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bsw/core_math.hpp"
#include "bsw/hash.hpp"
#include "bsw/rng.hpp"
#include "bsw/serialize.hpp"

namespace bsw {

// ---------------------------------------------------------------- RSA

struct RsaKeyPair {
  mpz_class p, q;    // secret primes
  mpz_class n;       // p*q
  mpz_class e;       // public exponent
  mpz_class d;       // e^-1 mod phi
  mpz_class phi;     // (p-1)(q-1)

  void validate() const {
    if (n != p * q) throw std::invalid_argument("rsa key: n != p*q");
    if (phi != (p - 1) * (q - 1)) throw std::invalid_argument("rsa key: bad phi");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), e.get_mpz_t(), phi.get_mpz_t());
    if (g != 1) throw std::invalid_argument("rsa key: gcd(e, phi) != 1");
    if (mod_reduce(d * e, phi) != 1) throw std::invalid_argument("rsa key: d*e != 1 mod phi");
  }
};

struct RsaPublicKey {
  mpz_class e, n;
};

inline RsaKeyPair rsa_from_primes(const mpz_class& p, const mpz_class& q, const mpz_class& e) {
  RsaKeyPair k;
  k.p = p;
  k.q = q;
  k.n = p * q;
  k.e = e;
  k.phi = (p - 1) * (q - 1);
  k.d = mod_inv(e, k.phi);  // throws if gcd(e, phi) != 1
  return k;
}

inline RsaKeyPair rsa_keygen(unsigned bits_per_prime, const mpz_class& e, SeededRng& rng) {
  if (e < 3 || e % 2 == 0) throw std::invalid_argument("rsa_keygen: e must be odd and >= 3");
  while (true) {
    mpz_class p = gen_prime(bits_per_prime, rng);
    mpz_class q = gen_prime(bits_per_prime, rng);
    if (p == q) continue;
    mpz_class phi = (p - 1) * (q - 1), g;
    mpz_gcd(g.get_mpz_t(), e.get_mpz_t(), phi.get_mpz_t());
    if (g != 1) continue;
    return rsa_from_primes(p, q, e);
  }
}

// Full-domain embedding of the message into [0, n).
inline mpz_class rsa_message_rep(std::string_view m, const mpz_class& n) {
  std::string buf;
  hash_append(buf, m);
  return hash_to_range('F', buf, n);
}

inline mpz_class rsa_sign_raw(const mpz_class& h, const RsaKeyPair& key) {
  return mod_exp(h, key.d, key.n);
}

inline bool rsa_verify_raw(const mpz_class& h, const mpz_class& s, const RsaPublicKey& pub) {
  if (s < 0 || s >= pub.n) return false;
  return mod_exp(s, pub.e, pub.n) == mod_reduce(h, pub.n);
}

inline mpz_class rsa_sign(std::string_view m, const RsaKeyPair& key) {
  return rsa_sign_raw(rsa_message_rep(m, key.n), key);
}

inline bool rsa_verify(std::string_view m, const mpz_class& s, const RsaPublicKey& pub) {
  return rsa_verify_raw(rsa_message_rep(m, pub.n), s, pub);
}

// ---------------------------------------------------------------- DSA

struct DsaKeyPair {
  SchnorrGroup group;
  mpz_class x;  // secret, in [1, q-1]
  mpz_class y;  // g^x mod p

  void validate() const {
    group.validate();
    if (x < 1 || x >= group.q) throw std::invalid_argument("dsa key: x out of range");
    if (y != mod_exp(group.g, x, group.p)) throw std::invalid_argument("dsa key: y != g^x");
  }
};

struct DsaPublicKey {
  SchnorrGroup group;
  mpz_class y;
};

struct DsaSignature {
  mpz_class r, s;
};

inline DsaKeyPair dsa_keygen(const SchnorrGroup& group, SeededRng& rng) {
  DsaKeyPair k;
  k.group = group;
  k.x = rng.range(1, group.q - 1);
  k.y = mod_exp(group.g, k.x, group.p);
  return k;
}

inline mpz_class dsa_message_hash(std::string_view m, const mpz_class& q) {
  std::string buf;
  hash_append(buf, m);
  return hash_to_range('D', buf, q);
}

// Core with an explicit nonce; demo/test surface for the worked toy values.
inline DsaSignature dsa_sign_with_nonce(const mpz_class& h, const DsaKeyPair& key,
                                        const mpz_class& k) {
  const auto& G = key.group;
  if (k < 1 || k >= G.q) throw std::invalid_argument("dsa: nonce out of range");
  DsaSignature sig;
  sig.r = mod_reduce(mod_exp(G.g, k, G.p), G.q);
  if (sig.r == 0) return sig;  // caller retries
  sig.s = mod_reduce(mod_inv(k, G.q) * (h + key.x * sig.r), G.q);
  return sig;
}

inline DsaSignature dsa_sign(std::string_view m, const DsaKeyPair& key, SeededRng& rng) {
  mpz_class h = dsa_message_hash(m, key.group.q);
  while (true) {
    mpz_class k = rng.range(1, key.group.q - 1);
    DsaSignature sig = dsa_sign_with_nonce(h, key, k);
    if (sig.r != 0 && sig.s != 0) return sig;
  }
}

inline bool dsa_verify_hash(const mpz_class& h, const DsaSignature& sig, const DsaPublicKey& pub) {
  const auto& G = pub.group;
  if (sig.r < 1 || sig.r >= G.q) return false;
  if (sig.s < 1 || sig.s >= G.q) return false;
  mpz_class w = mod_inv(sig.s, G.q);
  mpz_class u1 = mod_reduce(h * w, G.q);
  mpz_class u2 = mod_reduce(sig.r * w, G.q);
  mpz_class v = mod_reduce(mod_reduce(mod_exp(G.g, u1, G.p) * mod_exp(pub.y, u2, G.p), G.p), G.q);
  return v == sig.r;
}

inline bool dsa_verify(std::string_view m, const DsaSignature& sig, const DsaPublicKey& pub) {
  return dsa_verify_hash(dsa_message_hash(m, pub.group.q), sig, pub);
}

// ---------------------------------------------------------------- Schnorr

struct SchnorrKeyPair {
  SchnorrGroup group;
  mpz_class x;  // secret in [1, q)
  mpz_class X;  // g^x mod p

  void validate() const {
    group.validate();
    if (x < 1 || x >= group.q) throw std::invalid_argument("schnorr key: x out of range");
    if (X != mod_exp(group.g, x, group.p)) throw std::invalid_argument("schnorr key: X != g^x");
  }
};

struct SchnorrPublicKey {
  SchnorrGroup group;
  mpz_class X;
};

struct SchnorrSignature {
  mpz_class R;  // group element
  mpz_class s;  // in [0, q)
};

inline SchnorrKeyPair schnorr_keygen(const SchnorrGroup& group, SeededRng& rng) {
  SchnorrKeyPair k;
  k.group = group;
  k.x = rng.range(1, group.q - 1);
  k.X = mod_exp(group.g, k.x, group.p);
  return k;
}

// c = H(R, m) in [0, q). Shared verbatim by plain signing, the blind session,
// and the ROS forgery oracle; all three must hash identical bytes.
inline mpz_class schnorr_challenge(const mpz_class& R, std::string_view m, const mpz_class& q) {
  std::string buf;
  hash_append(buf, R);
  hash_append(buf, m);
  return hash_to_range('S', buf, q);
}

inline SchnorrSignature schnorr_sign_with_nonce(std::string_view m, const SchnorrKeyPair& key,
                                                const mpz_class& r) {
  const auto& G = key.group;
  SchnorrSignature sig;
  sig.R = mod_exp(G.g, r, G.p);
  mpz_class c = schnorr_challenge(sig.R, m, G.q);
  sig.s = mod_reduce(r + c * key.x, G.q);
  return sig;
}

inline SchnorrSignature schnorr_sign(std::string_view m, const SchnorrKeyPair& key,
                                     SeededRng& rng) {
  return schnorr_sign_with_nonce(m, key, rng.below(key.group.q));
}

inline bool schnorr_verify(std::string_view m, const SchnorrSignature& sig,
                           const SchnorrPublicKey& pub) {
  const auto& G = pub.group;
  if (sig.R <= 0 || sig.R >= G.p) return false;
  if (mod_exp(sig.R, G.q, G.p) != 1) return false;  // subgroup membership
  if (sig.s < 0 || sig.s >= G.q) return false;
  mpz_class c = schnorr_challenge(sig.R, m, G.q);
  mpz_class lhs = mod_exp(G.g, sig.s, G.p);
  mpz_class rhs = mod_reduce(sig.R * mod_exp(pub.X, c, G.p), G.p);
  return lhs == rhs;
}

// ---------------------------------------------------------------- key files

inline const std::string kRsaKeyHeader = "rsa-key v1";
inline const std::string kDsaKeyHeader = "dsa-key v1";
inline const std::string kSchnorrKeyHeader = "schnorr-key v1";

inline void write_rsa_key(const std::string& path, const RsaKeyPair& key, bool include_secret) {
  std::vector<std::string> lines{key.e.get_str(), key.n.get_str()};
  if (include_secret) {
    lines.push_back(key.d.get_str());
    lines.push_back(key.p.get_str());
    lines.push_back(key.q.get_str());
    lines.push_back(key.phi.get_str());
  }
  write_text_file(path, kRsaKeyHeader, lines);
}

// Returns the full pair when the file carries secrets, otherwise only (e, n)
// populated (d, p, q, phi zero).
inline std::pair<RsaKeyPair, bool> read_rsa_key(const std::string& path) {
  auto lines = read_text_file(path, kRsaKeyHeader);
  if (lines.size() != 2 && lines.size() != 6)
    throw std::runtime_error("rsa-key: expected 2 or 6 lines");
  RsaKeyPair k;
  k.e = parse_mpz(lines[0]);
  k.n = parse_mpz(lines[1]);
  bool secret = lines.size() == 6;
  if (secret) {
    k.d = parse_mpz(lines[2]);
    k.p = parse_mpz(lines[3]);
    k.q = parse_mpz(lines[4]);
    k.phi = parse_mpz(lines[5]);
    k.validate();
  }
  return {k, secret};
}

inline void write_dsa_key(const std::string& path, const DsaKeyPair& key, bool include_secret) {
  std::vector<std::string> lines{key.group.p.get_str(), key.group.q.get_str(),
                                 key.group.g.get_str(), key.y.get_str()};
  if (include_secret) lines.push_back(key.x.get_str());
  write_text_file(path, kDsaKeyHeader, lines);
}

inline std::pair<DsaKeyPair, bool> read_dsa_key(const std::string& path) {
  auto lines = read_text_file(path, kDsaKeyHeader);
  if (lines.size() != 4 && lines.size() != 5)
    throw std::runtime_error("dsa-key: expected 4 or 5 lines");
  DsaKeyPair k;
  k.group = SchnorrGroup{parse_mpz(lines[0]), parse_mpz(lines[1]), parse_mpz(lines[2])};
  k.group.validate();
  k.y = parse_mpz(lines[3]);
  if (mod_exp(k.y, k.group.q, k.group.p) != 1)
    throw std::runtime_error("dsa-key: y not in subgroup");
  bool secret = lines.size() == 5;
  if (secret) {
    k.x = parse_mpz(lines[4]);
    k.validate();
  }
  return {k, secret};
}

inline void write_schnorr_key(const std::string& path, const SchnorrKeyPair& key,
                              bool include_secret) {
  std::vector<std::string> lines{key.group.p.get_str(), key.group.q.get_str(),
                                 key.group.g.get_str(), key.X.get_str()};
  if (include_secret) lines.push_back(key.x.get_str());
  write_text_file(path, kSchnorrKeyHeader, lines);
}

inline std::pair<SchnorrKeyPair, bool> read_schnorr_key(const std::string& path) {
  auto lines = read_text_file(path, kSchnorrKeyHeader);
  if (lines.size() != 4 && lines.size() != 5)
    throw std::runtime_error("schnorr-key: expected 4 or 5 lines");
  SchnorrKeyPair k;
  k.group = SchnorrGroup{parse_mpz(lines[0]), parse_mpz(lines[1]), parse_mpz(lines[2])};
  k.group.validate();
  k.X = parse_mpz(lines[3]);
  if (mod_exp(k.X, k.group.q, k.group.p) != 1)
    throw std::runtime_error("schnorr-key: X not in subgroup");
  bool secret = lines.size() == 5;
  if (secret) {
    k.x = parse_mpz(lines[4]);
    k.validate();
  }
  return {k, secret};
}

// ---------------------------------------------------------- signature files

inline const std::string kRsaSigHeader = "rsa-sig v1";
inline const std::string kDsaSigHeader = "dsa-sig v1";
inline const std::string kSchnorrSigHeader = "schnorr-sig v1";

inline void write_rsa_sig(const std::string& path, const mpz_class& s) {
  write_text_file(path, kRsaSigHeader, {s.get_str()});
}

inline mpz_class read_rsa_sig(const std::string& path) {
  auto lines = read_text_file(path, kRsaSigHeader);
  if (lines.size() != 1) throw std::runtime_error("rsa-sig: expected 1 line");
  return parse_mpz(lines[0]);
}

inline void write_dsa_sig(const std::string& path, const DsaSignature& sig) {
  write_text_file(path, kDsaSigHeader, {sig.r.get_str(), sig.s.get_str()});
}

inline DsaSignature read_dsa_sig(const std::string& path) {
  auto lines = read_text_file(path, kDsaSigHeader);
  if (lines.size() != 2) throw std::runtime_error("dsa-sig: expected 2 lines");
  return {parse_mpz(lines[0]), parse_mpz(lines[1])};
}

inline void write_schnorr_sig(const std::string& path, const SchnorrSignature& sig) {
  write_text_file(path, kSchnorrSigHeader, {sig.R.get_str(), sig.s.get_str()});
}

inline SchnorrSignature read_schnorr_sig(const std::string& path) {
  auto lines = read_text_file(path, kSchnorrSigHeader);
  if (lines.size() != 2) throw std::runtime_error("schnorr-sig: expected 2 lines");
  return {parse_mpz(lines[0]), parse_mpz(lines[1])};
}

}  // namespace bsw
