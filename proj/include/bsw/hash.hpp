#pragma once
// Fixed hash plumbing. The underlying digest is SHA-256 (OpenSSL EVP); wider
// outputs come from counter-mode expansion block_i = SHA256(tag || be32(i) ||
// data). Every use site picks a one-byte domain tag from the table below so
// distinct schemes can never collide on hash inputs.
//
//   'D'  DSA message hash (mod q)
//   'S'  Schnorr challenge c = H(R, m) (shared by signing, blind sessions,
//        and the ROS forgery oracle, which must agree bit for bit)
//   'F'  RSA-FDH message-to-Z_n embedding
//   'W'  Fiat-Shamir lattice challenge stream
//   'M'  partially blind issuance message hash H_Mc into R_q
//   'E'  ecash PRF tree (serials, tag keys, info binding; sub-labelled)
//   'X'  tests and demos

#include <openssl/evp.h>

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bsw {

struct HashSpec {
  std::string algorithm = "sha-256";
  unsigned output_bits = 256;
  char domain_tag = 'X';
};

inline std::array<unsigned char, 32> sha256(const unsigned char* data, std::size_t len) {
  std::array<unsigned char, 32> out{};
  unsigned int n = 0;
  if (EVP_Digest(data, len, out.data(), &n, EVP_sha256(), nullptr) != 1 || n != 32)
    throw std::runtime_error("sha256 failed");
  return out;
}

inline std::array<unsigned char, 32> sha256(std::string_view s) {
  return sha256(reinterpret_cast<const unsigned char*>(s.data()), s.size());
}

// Message byte strings are built with unambiguous separators: decimal integers
// joined by '|'. Callers concatenate fields with these helpers so that
// serialization of hash inputs is identical everywhere.
inline void hash_append(std::string& buf, std::string_view s) {
  buf.append(s);
  buf.push_back('|');
}

inline void hash_append(std::string& buf, const mpz_class& x) {
  buf.append(x.get_str());
  buf.push_back('|');
}

inline void hash_append(std::string& buf, unsigned long x) {
  buf.append(std::to_string(x));
  buf.push_back('|');
}

// Counter-mode expansion of SHA-256 under a domain tag; returns the first
// `bits` bits as a nonnegative integer.
inline mpz_class wide_hash(char tag, std::string_view data, unsigned bits) {
  if (bits == 0) throw std::invalid_argument("wide_hash: bits == 0");
  std::size_t nbytes = (bits + 7) / 8;
  std::vector<unsigned char> acc;
  acc.reserve(nbytes + 32);
  std::uint32_t counter = 0;
  while (acc.size() < nbytes) {
    std::string block;
    block.push_back(tag);
    for (int b = 3; b >= 0; --b) block.push_back(static_cast<char>((counter >> (8 * b)) & 0xff));
    block.append(data);
    auto d = sha256(block);
    acc.insert(acc.end(), d.begin(), d.end());
    ++counter;
  }
  acc.resize(nbytes);
  unsigned drop = static_cast<unsigned>(nbytes * 8 - bits);
  if (drop) acc[0] = static_cast<unsigned char>(acc[0] & (0xffu >> drop));
  mpz_class out;
  mpz_import(out.get_mpz_t(), acc.size(), 1, 1, 0, 0, acc.data());
  return out;
}

// Uniform-enough element of [0, q): reduces a digest at least 128 bits wider
// than q, so the reduction bias is below 2^-128.
inline mpz_class hash_to_range(char tag, std::string_view data, const mpz_class& q) {
  if (q < 2) throw std::invalid_argument("hash_to_range: range must be >= 2");
  unsigned qbits = static_cast<unsigned>(mpz_sizeinbase(q.get_mpz_t(), 2));
  mpz_class wide = wide_hash(tag, data, qbits + 128);
  return wide % q;
}

inline mpz_class hash_to_range(std::string_view data, const mpz_class& q, const HashSpec& spec) {
  return hash_to_range(spec.domain_tag, data, q);
}

// Deterministic byte stream over the same expansion, for rejection decoding
// (sparse challenge vectors and similar).
class DigestStream {
 public:
  DigestStream(char tag, std::string data) : tag_(tag), data_(std::move(data)) {}

  unsigned char next_byte() {
    if (pos_ == buf_.size()) refill();
    return buf_[pos_++];
  }

  // Uniform in [0, n) for 1 <= n <= 256, by byte rejection.
  unsigned next_below(unsigned n) {
    if (n == 0 || n > 256) throw std::invalid_argument("next_below: bad bound");
    unsigned limit = 256 - (256 % n);
    while (true) {
      unsigned b = next_byte();
      if (b < limit) return b % n;
    }
  }

  bool next_bit() { return (next_byte() & 1) != 0; }

 private:
  void refill() {
    std::string block;
    block.push_back(tag_);
    for (int b = 3; b >= 0; --b) block.push_back(static_cast<char>((counter_ >> (8 * b)) & 0xff));
    block.append(data_);
    auto d = sha256(block);
    buf_.assign(d.begin(), d.end());
    pos_ = 0;
    ++counter_;
  }

  char tag_;
  std::string data_;
  std::vector<unsigned char> buf_;
  std::size_t pos_ = 0;
  std::uint32_t counter_ = 0;
};

}  // namespace bsw
