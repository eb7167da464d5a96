#pragma once
// Shared number theory: modular arithmetic, Miller-Rabin primality, prime
// generation, and Schnorr groups (prime p, prime q | p-1, g of order q).

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "bsw/rng.hpp"
#include "bsw/serialize.hpp"

namespace bsw {

inline unsigned bitlen(const mpz_class& x) {
  if (x == 0) return 0;
  return static_cast<unsigned>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

inline mpz_class mod_exp(const mpz_class& base, const mpz_class& exp, const mpz_class& modulus) {
  if (modulus < 2) throw std::invalid_argument("mod_exp: modulus must be >= 2");
  if (exp < 0) throw std::invalid_argument("mod_exp: exponent must be nonnegative");
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

struct not_invertible : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline mpz_class mod_inv(const mpz_class& a, const mpz_class& modulus) {
  if (modulus < 2) throw std::invalid_argument("mod_inv: modulus must be >= 2");
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw not_invertible("mod_inv: gcd(a, modulus) != 1");
  return out;
}

inline mpz_class mod_reduce(const mpz_class& x, const mpz_class& m) {
  mpz_class r = x % m;
  if (r < 0) r += m;
  return r;
}

// Representative of x mod q in (-q/2, q/2].
inline mpz_class centered_mod(const mpz_class& x, const mpz_class& q) {
  mpz_class r = mod_reduce(x, q);
  if (2 * r > q) r -= q;
  return r;
}

// Miller-Rabin with `rounds` pseudorandom bases (error <= 4^-rounds). Bases
// come from a fixed-seed stream so the predicate is a pure function of n.
inline bool is_probable_prime(const mpz_class& n, int rounds = 64) {
  if (n < 2) return false;
  static const int kSmall[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                               43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  for (int p : kSmall) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  mpz_class d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  SeededRng bases(0x6d725f6261736573ULL);
  for (int round = 0; round < rounds; ++round) {
    mpz_class a = bases.range(2, n - 2);
    mpz_class x = mod_exp(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned long i = 0; i + 1 < s; ++i) {
      x = (x * x) % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Uniform prime with exactly `bits` bits (top bit set), candidates odd.
inline mpz_class gen_prime(unsigned bits, SeededRng& rng) {
  if (bits < 2) throw std::invalid_argument("gen_prime: need bits >= 2");
  while (true) {
    mpz_class c = (mpz_class(1) << (bits - 1)) + rng.uniform_bits(bits - 1);
    c |= 1;
    if (is_probable_prime(c)) return c;
  }
}

struct SchnorrGroup {
  mpz_class p, q, g;

  bool operator==(const SchnorrGroup&) const = default;

  void validate() const {
    if (!is_probable_prime(p)) throw std::invalid_argument("group: p not prime");
    if (!is_probable_prime(q)) throw std::invalid_argument("group: q not prime");
    if ((p - 1) % q != 0) throw std::invalid_argument("group: q does not divide p-1");
    if (g <= 1 || g >= p) throw std::invalid_argument("group: g out of range");
    if (mod_exp(g, q, p) != 1) throw std::invalid_argument("group: g does not have order q");
  }
};

// p = k*q + 1 with exactly p_bits bits; g = h^((p-1)/q) != 1.
inline SchnorrGroup gen_schnorr_group(unsigned q_bits, unsigned p_bits, SeededRng& rng) {
  if (q_bits < 2) throw std::invalid_argument("gen_schnorr_group: q_bits too small");
  if (p_bits <= q_bits) throw std::invalid_argument("gen_schnorr_group: need p_bits > q_bits");
  mpz_class q = gen_prime(q_bits, rng);
  unsigned k_bits = p_bits - q_bits;
  mpz_class p;
  while (true) {
    mpz_class k;
    if (k_bits == 1) {
      k = 2;
    } else {
      k = (mpz_class(1) << (k_bits - 1)) + rng.uniform_bits(k_bits - 1);
      mpz_class two = 2;
      k -= k % two;  // k even keeps p = k*q + 1 odd
    }
    p = k * q + 1;
    if (bitlen(p) != p_bits) continue;
    if (is_probable_prime(p)) break;
  }
  mpz_class exp = (p - 1) / q;
  while (true) {
    mpz_class h = rng.range(2, p - 2);
    mpz_class g = mod_exp(h, exp, p);
    if (g != 1) {
      SchnorrGroup grp{p, q, g};
      grp.validate();
      return grp;
    }
  }
}

inline const std::string kSchnorrGroupHeader = "schnorr-group v1";

inline void write_schnorr_group(const std::string& path, const SchnorrGroup& g) {
  write_text_file(path, kSchnorrGroupHeader, {g.p.get_str(), g.q.get_str(), g.g.get_str()});
}

inline SchnorrGroup read_schnorr_group(const std::string& path) {
  auto lines = read_text_file(path, kSchnorrGroupHeader);
  if (lines.size() != 3) throw std::runtime_error("schnorr-group: expected 3 lines");
  SchnorrGroup g{parse_mpz(lines[0]), parse_mpz(lines[1]), parse_mpz(lines[2])};
  g.validate();
  return g;
}

}  // namespace bsw
