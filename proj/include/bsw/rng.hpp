#pragma once
// Deterministic seeded randomness. Every randomized operation in the library
// takes a SeededRng so runs reproduce exactly from a 64-bit seed. The raw
// stream is std::mt19937_64 (output fixed by the C++ standard across
// platforms); all sampling on top is written out here because stdlib
// distributions are implementation-defined.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bsw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, 2^bits), bits >= 1.
  mpz_class uniform_bits(unsigned bits) {
    if (bits == 0) throw std::invalid_argument("uniform_bits: bits == 0");
    mpz_class out = 0;
    unsigned full = bits / 64, rem = bits % 64;
    for (unsigned i = 0; i < full; ++i) {
      out <<= 64;
      out += mpz_class(mpz_from_u64(next_u64()));
    }
    if (rem) {
      out <<= rem;
      out += mpz_class(mpz_from_u64(next_u64() >> (64 - rem)));
    }
    return out;
  }

  // Uniform in [0, m), m >= 1, by rejection on bitlen(m)-bit draws.
  mpz_class below(const mpz_class& m) {
    if (m <= 0) throw std::invalid_argument("below: bound must be positive");
    if (m == 1) return 0;
    unsigned bits = static_cast<unsigned>(mpz_sizeinbase(m.get_mpz_t(), 2));
    while (true) {
      mpz_class c = uniform_bits(bits);
      if (c < m) return c;
    }
  }

  // Uniform in [lo, hi], inclusive.
  mpz_class range(const mpz_class& lo, const mpz_class& hi) {
    if (lo > hi) throw std::invalid_argument("range: lo > hi");
    return lo + below(hi - lo + 1);
  }

  long range_long(long lo, long hi) {
    return static_cast<long>(range(mpz_class(lo), mpz_class(hi)).get_si());
  }

  std::vector<unsigned char> bytes(std::size_t n) {
    std::vector<unsigned char> out(n);
    std::size_t i = 0;
    while (i < n) {
      std::uint64_t w = next_u64();
      for (int b = 0; b < 8 && i < n; ++b, ++i) out[i] = static_cast<unsigned char>(w >> (8 * b));
    }
    return out;
  }

  // Independent substream: used by the ecash harness to give each party its
  // own deterministic stream derived from the scenario seed.
  SeededRng child(std::string_view tag) const {
    return SeededRng(splitmix64(seed_ ^ fnv1a64(tag)));
  }

 private:
  static mpz_class mpz_from_u64(std::uint64_t w) {
    mpz_class out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    return out;
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace bsw
