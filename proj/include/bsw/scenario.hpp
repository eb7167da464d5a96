#pragma once
// Line-oriented scenario scripts over the eCash harness. A script is a list
// of whitespace-separated commands; '#' lines are comments. Execution is
// deterministic per (script, seed): same inputs, same trace bytes.
//
//   party <name> <bank|user|merchant|trader>
//   fee <amount>                 set the trader conversion fee
//   set-day <day>                advance the simulation clock
//   withdraw <user> <value> <expiry-day>
//   spend <user> <merchant> <coin-idx> <V> <info>
//   spend-replay <user> <merchant> <coin-idx> <start> <V> <info>
//   deposit <party> <received-idx>
//   trader-join <party> <trader> <coin-idx>
//   trader-spend <user> <merchant> <trader> <tcoin-idx> <V>
//   trader-spend-replay <user> <merchant> <trader> <tcoin-idx> <start> <V>
//   trader-redeem <party> <trader>
//   phase <label>                trace marker, anchors bank-messages asserts
//   assert <kind> [args...]      see run_assert below

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsw/ecash.hpp"

namespace bsw::ecash {

struct ScenarioResult {
  std::vector<std::string> trace;
  std::vector<std::string> ledger;
  std::size_t asserts_passed = 0;
  std::size_t asserts_failed = 0;

  bool ok() const { return asserts_failed == 0; }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline long arg_long(const std::vector<std::string>& t, std::size_t i) {
  if (i >= t.size()) throw ScenarioError("missing argument in: " + t[0]);
  try {
    std::size_t used = 0;
    long v = std::stol(t[i], &used);
    if (used != t[i].size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError("bad numeric argument '" + t[i] + "' in: " + t[0]);
  }
}

inline std::size_t arg_index(const std::vector<std::string>& t, std::size_t i) {
  long v = arg_long(t, i);
  if (v < 0) throw ScenarioError("negative index in: " + t[0]);
  return static_cast<std::size_t>(v);
}

inline const std::string& arg_str(const std::vector<std::string>& t, std::size_t i) {
  if (i >= t.size()) throw ScenarioError("missing argument in: " + t[0]);
  return t[i];
}

inline void arity(const std::vector<std::string>& t, std::size_t n) {
  if (t.size() != n) throw ScenarioError("wrong argument count for: " + t[0]);
}

}  // namespace detail

// Evaluates one scripted assertion against the harness state. Returns the
// pass flag; the caller records it in the trace.
inline bool run_assert(Sim& sim, const std::vector<std::string>& t) {
  using detail::arg_long;
  using detail::arg_str;
  const std::string& kind = arg_str(t, 1);
  auto bank_sum = [&](auto pick) {
    long sum = 0;
    sum += pick(*sim.default_bank().bank);
    return sum;
  };
  if (kind == "deposits-accepted")
    return bank_sum([](const BankState& b) { return b.accepted_count; }) == arg_long(t, 2);
  if (kind == "deposits-rejected")
    return bank_sum([](const BankState& b) { return b.rejected_count; }) == arg_long(t, 2);
  if (kind == "reports")
    return static_cast<long>(sim.default_bank().bank->reports.size()) == arg_long(t, 2);
  if (kind == "no-identify") return sim.default_bank().bank->reports.empty();
  if (kind == "identify") {
    const mpz_class& upk = sim.party(arg_str(t, 2)).upk;
    for (const DoubleSpendReport& r : sim.default_bank().bank->reports)
      if (r.upk == upk) return true;
    return false;
  }
  if (kind == "conservation") return sim.conservation_holds();
  if (kind == "trader-solvent") return sim.trader_solvent(arg_str(t, 2));
  if (kind == "bank-messages")
    return static_cast<long>(sim.bank_messages_since(arg_str(t, 2))) == arg_long(t, 3);
  if (kind == "refusals") {
    const Party& T = sim.party(arg_str(t, 2));
    if (!T.trader) throw ScenarioError("refusals: not a trader: " + T.name);
    return T.trader->refusals == arg_long(t, 3);
  }
  if (kind == "balance") return sim.party(arg_str(t, 2)).balance == arg_long(t, 3);
  if (kind == "cash") return sim.party(arg_str(t, 2)).cash() == arg_long(t, 3);
  throw ScenarioError("unknown assert kind: " + kind);
}

inline void run_command(Sim& sim, const std::vector<std::string>& t, ScenarioResult& result) {
  using detail::arg_index;
  using detail::arg_long;
  using detail::arg_str;
  using detail::arity;
  const std::string& cmd = t[0];
  if (cmd == "party") {
    arity(t, 3);
    auto role = parse_role(arg_str(t, 2));
    if (!role) throw ScenarioError("unknown role: " + t[2]);
    sim.add_party(arg_str(t, 1), *role);
  } else if (cmd == "fee") {
    arity(t, 2);
    sim.set_fee(arg_long(t, 1));
  } else if (cmd == "set-day") {
    arity(t, 2);
    sim.set_day(arg_long(t, 1));
  } else if (cmd == "withdraw") {
    arity(t, 4);
    sim.withdraw(sim.default_bank().name, arg_str(t, 1), arg_long(t, 2), arg_long(t, 3));
  } else if (cmd == "spend") {
    arity(t, 6);
    sim.spend(arg_str(t, 1), arg_str(t, 2), arg_index(t, 3), arg_long(t, 4), arg_str(t, 5));
  } else if (cmd == "spend-replay") {
    arity(t, 7);
    sim.spend_replay(arg_str(t, 1), arg_str(t, 2), arg_index(t, 3), arg_long(t, 4),
                     arg_long(t, 5), arg_str(t, 6));
  } else if (cmd == "deposit") {
    arity(t, 3);
    sim.deposit(arg_str(t, 1), arg_index(t, 2));
  } else if (cmd == "trader-join") {
    arity(t, 4);
    sim.trader_join(arg_str(t, 1), arg_str(t, 2), arg_index(t, 3));
  } else if (cmd == "trader-spend") {
    arity(t, 6);
    sim.trader_spend(arg_str(t, 1), arg_str(t, 2), arg_str(t, 3), arg_index(t, 4),
                     arg_long(t, 5));
  } else if (cmd == "trader-spend-replay") {
    arity(t, 7);
    sim.trader_spend_replay(arg_str(t, 1), arg_str(t, 2), arg_str(t, 3), arg_index(t, 4),
                            arg_long(t, 5), arg_long(t, 6));
  } else if (cmd == "trader-redeem") {
    arity(t, 3);
    sim.trader_redeem(arg_str(t, 1), arg_str(t, 2));
  } else if (cmd == "phase") {
    arity(t, 2);
    sim.phase(arg_str(t, 1));
  } else if (cmd == "assert") {
    bool pass = run_assert(sim, t);
    std::string line = "assert";
    for (std::size_t i = 1; i < t.size(); ++i) line += " " + t[i];
    line += pass ? " -> pass" : " -> FAIL";
    sim.note(line);
    if (pass)
      ++result.asserts_passed;
    else
      ++result.asserts_failed;
  } else {
    throw ScenarioError("unknown command: " + cmd);
  }
}

inline ScenarioResult run_scenario(const std::vector<std::string>& script, std::uint64_t seed) {
  Sim sim(seed);
  ScenarioResult result;
  for (const std::string& raw : script) {
    std::vector<std::string> tokens = detail::split_ws(raw);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    run_command(sim, tokens, result);
  }
  result.trace = sim.trace();
  result.ledger = sim.ledger_summary();
  return result;
}

inline ScenarioResult run_scenario_text(std::string_view text, std::uint64_t seed) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return run_scenario(lines, seed);
}

inline std::vector<std::string> load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario script: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace bsw::ecash
