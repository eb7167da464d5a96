#pragma once
// The ROS problem and the parallel one-more forgery against blind Schnorr.
// An instance holds the concrete oracle F(row) = H(prod_i g_i^{a_i}, m_slot)
// over the session commitments g_i; a solution is a set of coefficient rows
// plus one challenge vector satisfying ell+1 of the equations
// sum_i a_{k,i} c_i = F_k. Solvers: exhaustive batch search (toy moduli) and
// a generalized-birthday k-list merge (subexponential, Wagner-style).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsw/blind_sig.hpp"
#include "bsw/core_math.hpp"

namespace bsw::ros {

struct RosRow {
  std::size_t slot;                // which message this row's equation hashes
  std::vector<mpz_class> coeffs;   // a_{k,1..ell}
  bool operator==(const RosRow&) const = default;
};

class RosInstance {
 public:
  using Oracle = std::function<mpz_class(std::size_t slot, const std::vector<mpz_class>& coeffs)>;

  RosInstance(std::size_t sessions, mpz_class q, std::size_t slots, Oracle oracle)
      : sessions_(sessions), q_(std::move(q)), slots_(slots), oracle_(std::move(oracle)) {
    if (sessions_ == 0) throw std::invalid_argument("ros: need at least one session");
    if (slots_ < sessions_ + 1) throw std::invalid_argument("ros: need ell+1 message slots");
    if (q_ < 2) throw std::invalid_argument("ros: bad modulus");
  }

  std::size_t sessions() const { return sessions_; }
  const mpz_class& q() const { return q_; }
  std::size_t slots() const { return slots_; }
  std::uint64_t evaluations() const { return evals_; }

  mpz_class evaluate(std::size_t slot, const std::vector<mpz_class>& coeffs) const {
    if (slot >= slots_) throw std::invalid_argument("ros: slot out of range");
    if (coeffs.size() != sessions_) throw std::invalid_argument("ros: bad row width");
    ++evals_;
    return mod_reduce(oracle_(slot, coeffs), q_);
  }

 private:
  std::size_t sessions_;
  mpz_class q_;
  std::size_t slots_;
  Oracle oracle_;
  mutable std::uint64_t evals_ = 0;
};

struct RosSolution {
  std::vector<RosRow> rows;           // t candidate rows, t >= ell+1
  std::vector<mpz_class> challenges;  // c_1..c_ell
  std::vector<std::size_t> selected;  // ell+1 row indices, pairwise distinct slots
  std::uint64_t oracle_evals = 0;
};

// Independent re-evaluation of every selected equation; solvers run this
// before returning anything.
inline bool verify_ros_solution(const RosInstance& inst, const RosSolution& sol) {
  std::size_t ell = inst.sessions();
  if (sol.selected.size() != ell + 1) return false;
  if (sol.challenges.size() != ell) return false;
  std::set<std::size_t> slots;
  std::set<std::size_t> idxs;
  for (std::size_t k : sol.selected) {
    if (k >= sol.rows.size()) return false;
    if (!idxs.insert(k).second) return false;
    const RosRow& row = sol.rows[k];
    if (!slots.insert(row.slot).second) return false;  // distinct messages
    mpz_class lhs = 0;
    for (std::size_t i = 0; i < ell; ++i) lhs += row.coeffs[i] * sol.challenges[i];
    if (mod_reduce(lhs, inst.q()) != inst.evaluate(row.slot, row.coeffs)) return false;
  }
  return true;
}

// Solve M c = v over Z_q (q prime) by Gaussian elimination; nullopt if singular.
inline std::optional<std::vector<mpz_class>> solve_linear_mod(
    std::vector<std::vector<mpz_class>> M, std::vector<mpz_class> v, const mpz_class& q) {
  std::size_t n = M.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && mod_reduce(M[piv][col], q) == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(v[piv], v[col]);
    mpz_class inv = mod_inv(mod_reduce(M[col][col], q), q);
    for (std::size_t j = col; j < n; ++j) M[col][j] = mod_reduce(M[col][j] * inv, q);
    v[col] = mod_reduce(v[col] * inv, q);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      mpz_class f = mod_reduce(M[r][col], q);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) M[r][j] = mod_reduce(M[r][j] - f * M[col][j], q);
      v[r] = mod_reduce(v[r] - f * v[col], q);
    }
  }
  return v;
}

// Exhaustive search over batches of t = 2(ell+1) random coefficient rows
// (two candidate rows per message slot): pick one row per slot, solve the
// square subsystem, and test the leftover equation. Expected cost ~q oracle
// evaluations, so this is strictly a toy-modulus tool.
inline std::optional<RosSolution> ros_solve_bruteforce(const RosInstance& inst, SeededRng& rng,
                                                       std::uint64_t budget = 1000000) {
  std::size_t ell = inst.sessions();
  std::size_t t = 2 * (ell + 1);
  const mpz_class& q = inst.q();
  std::uint64_t start = inst.evaluations();
  while (inst.evaluations() - start + t <= budget) {
    std::vector<RosRow> rows;
    std::vector<mpz_class> values;
    for (std::size_t k = 0; k < t; ++k) {
      RosRow row{k % (ell + 1), {}};
      for (std::size_t i = 0; i < ell; ++i) row.coeffs.push_back(rng.below(q));
      values.push_back(inst.evaluate(row.slot, row.coeffs));
      rows.push_back(std::move(row));
    }
    // combo bit s picks the first or second candidate row for slot s
    for (std::uint64_t combo = 0; combo < (1ULL << (ell + 1)); ++combo) {
      std::vector<std::size_t> picked;
      for (std::size_t s = 0; s <= ell; ++s)
        picked.push_back(s + ((combo >> s) & 1) * (ell + 1));
      std::vector<std::vector<mpz_class>> M;
      std::vector<mpz_class> v;
      for (std::size_t s = 0; s < ell; ++s) {
        M.push_back(rows[picked[s]].coeffs);
        v.push_back(values[picked[s]]);
      }
      auto c = solve_linear_mod(M, v, q);
      if (!c) continue;
      const RosRow& last = rows[picked[ell]];
      mpz_class lhs = 0;
      for (std::size_t i = 0; i < ell; ++i) lhs += last.coeffs[i] * (*c)[i];
      if (mod_reduce(lhs, q) != values[picked[ell]]) continue;
      RosSolution sol{rows, *c, picked, 0};
      if (!verify_ros_solution(inst, sol)) continue;
      sol.oracle_evals = inst.evaluations() - start;
      return sol;
    }
  }
  return std::nullopt;
}

namespace detail {

struct MergeEntry {
  mpz_class value;  // running sum mod q
  std::vector<std::pair<std::uint32_t, std::uint32_t>> picks;  // (session, candidate idx)
};

// Join A and B keeping |a+b mod q| centered <= bound; bound 0 means exact 0.
inline std::vector<MergeEntry> merge_lists(const std::vector<MergeEntry>& A,
                                           std::vector<MergeEntry> B, const mpz_class& bound,
                                           const mpz_class& q, std::size_t cap) {
  std::sort(B.begin(), B.end(),
            [](const MergeEntry& x, const MergeEntry& y) { return x.value < y.value; });
  std::vector<MergeEntry> out;
  auto emit_range = [&](const MergeEntry& a, const mpz_class& lo, const mpz_class& hi) {
    auto first = std::lower_bound(B.begin(), B.end(), lo, [](const MergeEntry& e,
                                                             const mpz_class& v) {
      return e.value < v;
    });
    for (auto it = first; it != B.end() && it->value <= hi; ++it) {
      if (out.size() >= cap) return;
      MergeEntry e{mod_reduce(a.value + it->value, q), a.picks};
      e.picks.insert(e.picks.end(), it->picks.begin(), it->picks.end());
      out.push_back(std::move(e));
    }
  };
  for (const auto& a : A) {
    if (out.size() >= cap) break;
    mpz_class lo = mod_reduce(-bound - a.value, q);
    mpz_class hi = mod_reduce(bound - a.value, q);
    if (lo <= hi) {
      emit_range(a, lo, hi);
    } else {
      emit_range(a, lo, q - 1);
      emit_range(a, 0, hi);
    }
  }
  return out;
}

}  // namespace detail

// Generalized-birthday solver. The largest power of two ell' <= ell sessions
// carry the birthday structure: session i contributes candidates
// c_i = F(w e_i, m_i) / w over random w in Z_q^*, and the k-tree merge finds
// one candidate per session with sum c_i = F(all-ones over the first ell'
// sessions, m_ell). Sessions beyond ell' are pinned with w = 1 pivot rows.
// ell = 1 falls back to brute force (no lists to merge).
inline std::optional<RosSolution> ros_solve_klist(const RosInstance& inst, SeededRng& rng,
                                                  std::size_t list_size = 0) {
  std::size_t ell = inst.sessions();
  if (ell < 2) return ros_solve_bruteforce(inst, rng);
  const mpz_class& q = inst.q();
  std::uint64_t start = inst.evaluations();

  std::size_t ell2 = 1;
  while (ell2 * 2 <= ell) ell2 *= 2;
  unsigned levels = 0;
  for (std::size_t t = ell2; t > 1; t /= 2) ++levels;

  // auto list size: 4 * q^(1/(levels+1)), clamped to the w domain
  mpz_class root;
  mpz_root(root.get_mpz_t(), q.get_mpz_t(), levels + 1);
  std::size_t n = list_size ? list_size
                            : static_cast<std::size_t>(4 * (root.get_ui() + 1));
  if (mpz_class(static_cast<unsigned long>(n)) > q - 1)
    n = static_cast<std::size_t>(mpz_class(q - 1).get_ui());
  if (n == 0) return std::nullopt;

  // per-session candidate tables over distinct nonzero w
  std::vector<std::vector<mpz_class>> ws(ell2), cands(ell2);
  for (std::size_t i = 0; i < ell2; ++i) {
    std::set<std::string> used;
    while (ws[i].size() < n) {
      mpz_class w = rng.range(1, q - 1);
      if (!used.insert(w.get_str()).second) continue;
      std::vector<mpz_class> coeffs(ell, 0);
      coeffs[i] = w;
      mpz_class v = inst.evaluate(i, coeffs);
      ws[i].push_back(w);
      cands[i].push_back(mod_reduce(v * mod_inv(w, q), q));
    }
  }

  // target from the all-ones row over the participating sessions
  std::vector<mpz_class> final_coeffs(ell, 0);
  for (std::size_t i = 0; i < ell2; ++i) final_coeffs[i] = 1;
  mpz_class target = inst.evaluate(ell, final_coeffs);

  std::vector<std::vector<detail::MergeEntry>> lists(ell2);
  for (std::size_t i = 0; i < ell2; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class v = cands[i][j];
      if (i == 0) v = mod_reduce(v - target, q);  // absorb the target once
      lists[i].push_back({v, {{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}}});
    }
  }

  std::size_t cap = 16 * n;
  mpz_class nz(static_cast<unsigned long>(n));
  for (unsigned level = 1; lists.size() > 1; ++level) {
    // bound schedule b_j = q * 2^(j-1) / n^j keeps survivor counts near n
    mpz_class bound = 0;
    if (level < levels) {
      mpz_class denom = 1;
      for (unsigned j = 0; j < level; ++j) denom *= nz;
      bound = (q * (mpz_class(1) << (level - 1))) / denom;
    }
    std::vector<std::vector<detail::MergeEntry>> next;
    for (std::size_t i = 0; i + 1 < lists.size(); i += 2)
      next.push_back(detail::merge_lists(lists[i], std::move(lists[i + 1]), bound, q, cap));
    if (lists.size() % 2) next.push_back(std::move(lists.back()));
    lists = std::move(next);
  }

  const auto& survivors = lists[0];
  auto hit = std::find_if(survivors.begin(), survivors.end(),
                          [](const detail::MergeEntry& e) { return e.value == 0; });
  if (hit == survivors.end()) return std::nullopt;

  // rebuild challenges: merged sessions from the hit, the rest pinned at w=1
  std::vector<mpz_class> challenges(ell);
  std::vector<mpz_class> w_of(ell, 1);
  for (auto [session, idx] : hit->picks) {
    challenges[session] = cands[session][idx];
    w_of[session] = ws[session][idx];
  }
  RosSolution sol;
  for (std::size_t i = 0; i < ell; ++i) {
    RosRow row{i, std::vector<mpz_class>(ell, 0)};
    row.coeffs[i] = w_of[i];
    if (i >= ell2) challenges[i] = inst.evaluate(i, row.coeffs);  // pinned pivot
    sol.rows.push_back(std::move(row));
  }
  sol.rows.push_back(RosRow{ell, final_coeffs});
  sol.challenges = challenges;
  for (std::size_t k = 0; k <= ell; ++k) sol.selected.push_back(k);
  if (!verify_ros_solution(inst, sol)) return std::nullopt;
  sol.oracle_evals = inst.evaluations() - start;
  return sol;
}

// Pluggable solver slot: any callable with this shape can drive the attack
// harness (room for further algorithms beyond the two built-ins).
using RosSolver =
    std::function<std::optional<RosSolution>(const RosInstance&, SeededRng&)>;

enum class Solver { bruteforce, klist };

struct attack_failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ForgeryBatch {
  struct Tuple {
    std::string message;
    mpz_class commitment;  // f_k = prod g_i^{a_{k,i}}, the signature's R
    mpz_class c;           // c'_k
    mpz_class z;           // z'_k
  };
  std::vector<Tuple> tuples;             // ell+1 of them
  std::vector<std::size_t> session_ids;  // the ell consumed sessions
  std::uint64_t oracle_evals = 0;
};

// The parallel attack: open ell sessions, solve ROS over the commitments,
// answer every session once, and emit ell+1 signatures. Solver failure aborts
// before any respond() call, so no signer responses are consumed.
inline ForgeryBatch one_more_forgery(SchnorrBlindSigner& signer, std::size_t ell,
                                     const std::vector<std::string>& messages,
                                     const RosSolver& solver, SeededRng& rng) {
  if (messages.size() != ell + 1) throw std::invalid_argument("forgery: need ell+1 messages");
  if (std::set<std::string>(messages.begin(), messages.end()).size() != messages.size())
    throw std::invalid_argument("forgery: messages must be distinct");
  const SchnorrGroup& G = signer.group();
  SchnorrPublicKey pub = signer.public_key();

  std::vector<std::size_t> sids;
  std::vector<mpz_class> g(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    sids.push_back(signer.open_session(rng));
    g[i] = signer.commitment(sids[i]);
  }

  auto commitment_product = [&](const std::vector<mpz_class>& coeffs) {
    mpz_class f = 1;
    for (std::size_t i = 0; i < ell; ++i) {
      if (coeffs[i] == 0) continue;
      f = mod_reduce(f * mod_exp(g[i], mod_reduce(coeffs[i], G.q), G.p), G.p);
    }
    return f;
  };
  RosInstance inst(ell, G.q, ell + 1,
                   [&](std::size_t slot, const std::vector<mpz_class>& coeffs) {
                     return schnorr_challenge(commitment_product(coeffs), messages[slot], G.q);
                   });

  std::optional<RosSolution> sol = solver(inst, rng);
  if (!sol) throw attack_failed("ros solver found no solution");

  std::vector<mpz_class> z(ell);
  for (std::size_t i = 0; i < ell; ++i) z[i] = signer.respond(sids[i], sol->challenges[i]);

  ForgeryBatch batch;
  batch.session_ids = sids;
  for (std::size_t k : sol->selected) {
    const RosRow& row = sol->rows[k];
    mpz_class c = 0, zz = 0;
    for (std::size_t i = 0; i < ell; ++i) {
      c += row.coeffs[i] * sol->challenges[i];
      zz += row.coeffs[i] * z[i];
    }
    c = mod_reduce(c, G.q);
    zz = mod_reduce(zz, G.q);
    mpz_class f = commitment_product(row.coeffs);
    // correctness identity g^{z'} h^{-c'} = f_k
    mpz_class lhs = mod_reduce(mod_exp(G.g, zz, G.p) * mod_exp(pub.X, G.q - c, G.p), G.p);
    if (lhs != f) throw attack_failed("forgery identity failed");
    if (!schnorr_verify(messages[row.slot], {f, zz}, pub))
      throw attack_failed("forged signature did not verify");
    batch.tuples.push_back({messages[row.slot], f, c, zz});
  }
  batch.oracle_evals = inst.evaluations();
  return batch;
}

inline ForgeryBatch one_more_forgery(SchnorrBlindSigner& signer, std::size_t ell,
                                     const std::vector<std::string>& messages, Solver which,
                                     SeededRng& rng, std::size_t list_size = 0,
                                     std::uint64_t budget = 1000000) {
  RosSolver solver;
  if (which == Solver::klist) {
    solver = [list_size](const RosInstance& inst, SeededRng& r) {
      return ros_solve_klist(inst, r, list_size);
    };
  } else {
    solver = [budget](const RosInstance& inst, SeededRng& r) {
      return ros_solve_bruteforce(inst, r, budget);
    };
  }
  return one_more_forgery(signer, ell, messages, solver, rng);
}

}  // namespace bsw::ros
