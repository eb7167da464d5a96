#pragma once
// Lattice hardness-instance tooling: SIS instances with planted witnesses,
// LWE sample generation and secret checking, trapdoor verification for both
// trapdoor notions (a short null-space basis, and a short G-relation), and
// the base-2 gadget matrix with its bit-decomposition identity.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bsw/core_math.hpp"
#include "bsw/lattice.hpp"
#include "bsw/rng.hpp"
#include "bsw/serialize.hpp"

namespace bsw::lat {

// --------------------------------------------------------------------- SIS

struct SisInstance {
  std::size_t n = 0, m = 0;
  mpz_class q;
  mpz_class B;  // Euclidean norm bound on witnesses
  ZMat A;       // n x m, entries in [0, q)
};

inline bool sis_check(const SisInstance& inst, const ZVec& x) {
  if (x.size() != inst.m) return false;
  bool nonzero = false;
  for (const auto& v : x) nonzero = nonzero || v != 0;
  if (!nonzero) return false;
  if (norm_sq(x) > inst.B * inst.B) return false;
  for (std::size_t i = 0; i < inst.n; ++i) {
    mpz_class row = 0;
    for (std::size_t j = 0; j < inst.m; ++j) row += inst.A[i][j] * x[j];
    if (mod_reduce(row, inst.q) != 0) return false;
  }
  return true;
}

// Uniform A with a planted short witness: sample x with a final +-1 entry,
// draw every column but the last uniformly, then solve the last column from
// A x = 0. The +-1 pivot keeps the plant independent of q's factorization.
inline std::pair<SisInstance, ZVec> sis_gen(std::size_t n, std::size_t m, const mpz_class& q,
                                            const mpz_class& B, SeededRng& rng) {
  if (m <= n) throw std::invalid_argument("sis_gen: need m > n");
  if (q < 2) throw std::invalid_argument("sis_gen: bad modulus");
  if (B < 1) throw std::invalid_argument("sis_gen: norm bound below any nonzero witness");
  // per-coordinate bound c with c^2 (m-1) + 1 <= B^2
  mpz_class c2 = (B * B - 1) / static_cast<unsigned long>(m - 1);
  mpz_class c;
  mpz_sqrt(c.get_mpz_t(), c2.get_mpz_t());
  ZVec x(m);
  for (std::size_t j = 0; j + 1 < m; ++j) x[j] = c == 0 ? 0 : rng.range(-c, c);
  x[m - 1] = rng.bit() ? 1 : -1;
  SisInstance inst{n, m, q, B, ZMat(n, ZVec(m))};
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class partial = 0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      inst.A[i][j] = rng.below(q);
      partial += inst.A[i][j] * x[j];
    }
    inst.A[i][m - 1] = mod_reduce(-partial * x[m - 1], q);  // (+-1)^-1 = +-1
  }
  return {inst, x};
}

// Exhaustive witness search over the coefficient box; strictly a toy oracle.
inline std::optional<ZVec> sis_bruteforce(const SisInstance& inst,
                                          std::uint64_t budget = 20000000) {
  if (!inst.B.fits_slong_p()) throw budget_exceeded("sis_bruteforce: bound too large");
  std::vector<long> bounds(inst.m, inst.B.get_si());
  detail::box_size_checked(bounds, budget);
  std::optional<ZVec> found;
  detail::enumerate_box(identity_matrix(inst.m), bounds, [&](const std::vector<long>&,
                                                             const ZVec& x) {
    if (!found && sis_check(inst, x)) found = x;
  });
  return found;
}

// --------------------------------------------------------------------- LWE

struct LweInstance {
  std::size_t n = 0;
  mpz_class q;
  mpz_class error_bound;  // noise uniform on [-error_bound, error_bound]
  ZMat a;                 // m rows in Z_q^n
  ZVec b;                 // m values
};

inline bool lwe_check(const LweInstance& inst, const ZVec& s) {
  if (s.size() != inst.n) return false;
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    mpz_class e = centered_mod(inst.b[i] - dot(inst.a[i], s), inst.q);
    if (abs(e) > inst.error_bound) return false;
  }
  return true;
}

inline std::pair<LweInstance, ZVec> lwe_gen(std::size_t n, std::size_t m, const mpz_class& q,
                                            const mpz_class& error_bound, SeededRng& rng) {
  if (n == 0 || m == 0 || q < 2) throw std::invalid_argument("lwe_gen: bad parameters");
  if (2 * error_bound >= q) throw std::invalid_argument("lwe_gen: noise swamps the modulus");
  ZVec s(n);
  for (auto& v : s) v = rng.below(q);
  LweInstance inst{n, q, error_bound, ZMat(m, ZVec(n)), ZVec(m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (auto& v : inst.a[i]) v = rng.below(q);
    mpz_class e = error_bound == 0 ? mpz_class(0) : rng.range(-error_bound, error_bound);
    inst.b[i] = mod_reduce(dot(inst.a[i], s) + e, q);
  }
  return {inst, s};
}

// Same a-vectors, uniform b: the "random" side of the decision game.
inline LweInstance lwe_decoy(const LweInstance& real, SeededRng& rng) {
  LweInstance decoy = real;
  for (auto& v : decoy.b) v = rng.below(real.q);
  return decoy;
}

// Enumerates all of Z_q^n; returns every secret passing lwe_check.
inline std::vector<ZVec> lwe_recover_bruteforce(const LweInstance& inst,
                                                std::uint64_t budget = 20000000) {
  mpz_class total = 1;
  for (std::size_t i = 0; i < inst.n; ++i) total *= inst.q;
  if (total > budget) throw budget_exceeded("lwe_recover_bruteforce: q^n exceeds budget");
  std::vector<ZVec> hits;
  ZVec s(inst.n, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == inst.n) {
      if (lwe_check(inst, s)) hits.push_back(s);
      return;
    }
    for (mpz_class v = 0; v < inst.q; ++v) {
      s[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return hits;
}

// --------------------------------------------------------- trapdoor checks

inline mpz_class max_column_norm_sq(const ZMat& M) {
  mpz_class best = 0;
  for (std::size_t j = 0; j < M[0].size(); ++j) {
    mpz_class col = 0;
    for (std::size_t i = 0; i < M.size(); ++i) col += M[i][j] * M[i][j];
    if (col > best) best = col;
  }
  return best;
}

// Short full-rank basis of the null space: A T = 0 mod q, T nonsingular over
// the integers, every column within the norm bound.
inline bool trapdoor_check_type1(const ZMat& A, const ZMat& T, const mpz_class& q,
                                 const mpz_class& norm_bound) {
  std::size_t n = A.size(), m = A[0].size();
  if (T.size() != m) throw std::invalid_argument("trapdoor_check_type1: shape mismatch");
  for (const auto& r : T)
    if (r.size() != m) throw std::invalid_argument("trapdoor_check_type1: T must be m x m");
  ZMat prod = mat_mul(A, T);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (mod_reduce(prod[i][j], q) != 0) return false;
  if (det_bareiss(T) == 0) return false;
  return max_column_norm_sq(T) <= norm_bound * norm_bound;
}

// Short G-relation: A R = G mod q with every column of R within the bound.
inline bool trapdoor_check_type2(const ZMat& A, const ZMat& R, const ZMat& G, const mpz_class& q,
                                 const mpz_class& norm_bound) {
  if (R.size() != A[0].size() || G.size() != A.size() || R[0].size() != G[0].size())
    throw std::invalid_argument("trapdoor_check_type2: shape mismatch");
  ZMat prod = mat_mul(A, R);
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G[0].size(); ++j)
      if (mod_reduce(prod[i][j] - G[i][j], q) != 0) return false;
  return max_column_norm_sq(R) <= norm_bound * norm_bound;
}

// ------------------------------------------------------------------ gadget

inline unsigned gadget_log(const mpz_class& q) {
  if (q < 2) throw std::invalid_argument("gadget_log: bad modulus");
  return bitlen(q - 1);  // k = ceil(log2 q)
}

inline ZVec gadget_vector(const mpz_class& q) {
  unsigned k = gadget_log(q);
  ZVec g(k);
  for (unsigned i = 0; i < k; ++i) g[i] = mpz_class(1) << i;
  return g;
}

// Block-diagonal n x nk matrix with one gadget vector per block row.
inline ZMat gadget_matrix(std::size_t n, const mpz_class& q) {
  ZVec g = gadget_vector(q);
  ZMat G(n, ZVec(n * g.size(), 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < g.size(); ++j) G[i][i * g.size() + j] = g[j];
  return G;
}

inline ZVec bit_decompose(const mpz_class& x, unsigned k) {
  if (x < 0 || x >= (mpz_class(1) << k)) throw std::invalid_argument("bit_decompose: range");
  ZVec bits(k);
  for (unsigned i = 0; i < k; ++i) bits[i] = mpz_tstbit(x.get_mpz_t(), i);
  return bits;
}

inline ZVec bit_decompose_vec(const ZVec& v, unsigned k) {
  ZVec out;
  for (const auto& x : v) {
    ZVec bits = bit_decompose(x, k);
    out.insert(out.end(), bits.begin(), bits.end());
  }
  return out;
}

// ------------------------------------------------------------ SIS files

inline const std::string kSisHeader = "sis-instance v1";
inline const std::string kSisWitnessHeader = "sis-witness v1";

inline void write_sis_instance(const std::string& path, const SisInstance& inst) {
  std::vector<std::string> lines{std::to_string(inst.n) + " " + std::to_string(inst.m) + " " +
                                 inst.q.get_str() + " " + inst.B.get_str()};
  for (const auto& row : inst.A) lines.push_back(format_mpz_row(row));
  write_text_file(path, kSisHeader, lines);
}

inline SisInstance read_sis_instance(const std::string& path) {
  auto lines = read_text_file(path, kSisHeader);
  if (lines.empty()) throw std::runtime_error("sis-instance: missing parameter line");
  auto params = parse_mpz_row(lines[0]);
  if (params.size() != 4) throw std::runtime_error("sis-instance: expected 'n m q B'");
  SisInstance inst;
  inst.n = params[0].get_ui();
  inst.m = params[1].get_ui();
  inst.q = params[2];
  inst.B = params[3];
  if (lines.size() != inst.n + 1) throw std::runtime_error("sis-instance: row count mismatch");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    inst.A.push_back(parse_mpz_row(lines[i]));
    if (inst.A.back().size() != inst.m) throw std::runtime_error("sis-instance: ragged row");
  }
  return inst;
}

inline void write_sis_witness(const std::string& path, const ZVec& x) {
  write_text_file(path, kSisWitnessHeader, {format_mpz_row(x)});
}

inline ZVec read_sis_witness(const std::string& path) {
  auto lines = read_text_file(path, kSisWitnessHeader);
  if (lines.size() != 1) throw std::runtime_error("sis-witness: expected 1 line");
  return parse_mpz_row(lines[0]);
}

}  // namespace bsw::lat
