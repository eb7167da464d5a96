#pragma once
// Offline divisible eCash simulation: a bank issues divisible coins through
// blind FDH signing under per-(value, expiry) attribute keys, users spend by
// disclosing consecutive PRF-derived serial numbers with linking tags, the
// bank detects double spends at deposit time and extracts the cheater's key
// from two tags on one serial, and a trader community keeps commerce running
// while the bank is offline. A deterministic single-threaded harness drives
// every protocol over an explicit message channel and records a full trace;
// scenarios are line-oriented scripts over that harness.
//
// Transparency caveat: validity evidence shows the bank the coin's serial
// seed and issuer signature instead of a zero-knowledge proof, so anonymity
// holds against merchants but not against the bank. Tag well-formedness is
// likewise asserted rather than proven; identify() is exercised only on
// honestly computed tags.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bsw/blind_sig.hpp"
#include "bsw/classic_sig.hpp"
#include "bsw/core_math.hpp"
#include "bsw/hash.hpp"
#include "bsw/rng.hpp"

namespace bsw::ecash {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ coins & PRF

struct Coin {
  long value = 0;        // N: number of unit serials
  mpz_class sn_seed;     // serial derivation secret, shown to the bank at deposit
  mpz_class tag_seed;    // tag-key secret, never disclosed
  long expiry_day = 0;
  std::string gamma;     // "value|expiry", selects the issuer attribute key
  mpz_class signature;   // blind FDH signature over coin_message(sn_seed)
  long spent = 0;        // user-local counter of disclosed serials

  long remaining() const { return value - spent; }
};

inline std::string make_gamma(long value, long expiry_day) {
  return std::to_string(value) + "|" + std::to_string(expiry_day);
}

inline std::optional<std::pair<long, long>> parse_gamma(const std::string& gamma) {
  auto bar = gamma.find('|');
  if (bar == std::string::npos) return std::nullopt;
  try {
    std::size_t a = 0, b = 0;
    long value = std::stol(gamma.substr(0, bar), &a);
    long expiry = std::stol(gamma.substr(bar + 1), &b);
    if (a != bar || b != gamma.size() - bar - 1 || value < 1) return std::nullopt;
    return std::pair<long, long>{value, expiry};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// The string the issuer actually signs; binds only the serial seed, the
// attribute key carries (value, expiry).
inline std::string coin_message(const mpz_class& sn_seed) {
  std::string buf;
  hash_append(buf, "coin");
  hash_append(buf, sn_seed);
  return buf;
}

inline mpz_class serial_at(const mpz_class& sn_seed, unsigned long j) {
  std::string buf;
  hash_append(buf, "sn");
  hash_append(buf, sn_seed);
  hash_append(buf, j);
  return wide_hash('E', buf, 128);
}

inline std::vector<mpz_class> derive_serials(const Coin& coin, long i, long V) {
  if (i < 0 || V < 1 || i + V > coin.value)
    throw std::invalid_argument("derive_serials: index range exceeds coin value");
  std::vector<mpz_class> out;
  out.reserve(static_cast<std::size_t>(V));
  for (long j = 0; j < V; ++j)
    out.push_back(serial_at(coin.sn_seed, static_cast<unsigned long>(i + j)));
  return out;
}

inline mpz_class tag_key(const mpz_class& tag_seed, const mpz_class& serial, const mpz_class& q) {
  std::string buf;
  hash_append(buf, "tag");
  hash_append(buf, tag_seed);
  hash_append(buf, serial);
  return hash_to_range('E', buf, q);
}

// Linking point h = H(payee key, info, serial): two tags on one serial with
// distinct points solve to the spender's secret key.
inline mpz_class link_point(const mpz_class& payee, const std::string& info,
                            const mpz_class& serial, const mpz_class& q) {
  std::string buf;
  hash_append(buf, "link");
  hash_append(buf, payee);
  hash_append(buf, info);
  hash_append(buf, serial);
  return hash_to_range('E', buf, q);
}

// -------------------------------------------------------------- transcripts

struct TagEntry {
  mpz_class serial;
  mpz_class tag;  // usk * link_point + tag_key mod q
};

struct SpendTranscript {
  std::size_t id = 0;
  long V = 0;
  std::string info;           // payee-supplied public context, unique per transaction
  std::vector<TagEntry> Z;    // disclosed serials plus linking tags
  mpz_class payee;            // registration key the tags are bound to
  // validity evidence (transparent mode, read by the bank only)
  std::string gamma;
  mpz_class seed;             // sn_seed
  mpz_class signature;
  long start = 0;             // first disclosed serial index
};

struct CheckReport {
  bool valid = false;
  std::string reason;
};

inline CheckReport check_deposit(const SpendTranscript& t, const AttributeKeyRing& issuer_keys,
                                 long today, const mpz_class& q) {
  auto ge = parse_gamma(t.gamma);
  if (!ge) return {false, "malformed gamma"};
  auto [value, expiry] = *ge;
  if (!issuer_keys.has(t.gamma)) return {false, "unknown issuer key"};
  if (!rsa_verify(coin_message(t.seed), t.signature, issuer_keys.public_key_for(t.gamma)))
    return {false, "issuer signature invalid"};
  if (today > expiry) return {false, "coin expired"};
  if (t.V < 1 || static_cast<long>(t.Z.size()) != t.V) return {false, "serial count mismatch"};
  if (t.start < 0 || t.start + t.V > value) return {false, "serial index out of range"};
  std::set<std::string> seen;
  for (long j = 0; j < t.V; ++j) {
    const TagEntry& entry = t.Z[static_cast<std::size_t>(j)];
    if (entry.serial != serial_at(t.seed, static_cast<unsigned long>(t.start + j)))
      return {false, "serial derivation mismatch"};
    if (!seen.insert(entry.serial.get_str()).second) return {false, "repeated serial"};
    if (entry.tag < 0 || entry.tag >= q) return {false, "tag out of range"};
  }
  return {true, ""};
}

// ---------------------------------------------------------------- identify

enum class IdentifyKind { none, replay, named };

struct IdentifyResult {
  IdentifyKind kind = IdentifyKind::none;
  mpz_class upk;          // set when kind == named
  mpz_class serial;       // the shared serial that triggered extraction
};

// Two-point extraction: a serial disclosed under two distinct linking points
// gives usk = (T1 - T2) / (h1 - h2); identical context on both sides is a
// replay, not a double spend.
inline IdentifyResult identify(const SpendTranscript& a, const SpendTranscript& b,
                               const SchnorrGroup& group) {
  std::map<std::string, const TagEntry*> index;
  for (const TagEntry& e : a.Z) index.emplace(e.serial.get_str(), &e);
  for (const TagEntry& eb : b.Z) {
    auto it = index.find(eb.serial.get_str());
    if (it == index.end()) continue;
    const TagEntry& ea = *it->second;
    if (a.info == b.info && a.payee == b.payee) return {IdentifyKind::replay, 0, ea.serial};
    mpz_class h1 = link_point(a.payee, a.info, ea.serial, group.q);
    mpz_class h2 = link_point(b.payee, b.info, eb.serial, group.q);
    if (h1 == h2) return {IdentifyKind::replay, 0, ea.serial};
    mpz_class usk = mod_reduce((ea.tag - eb.tag) * mod_inv(mod_reduce(h1 - h2, group.q), group.q),
                               group.q);
    return {IdentifyKind::named, mod_exp(group.g, usk, group.p), ea.serial};
  }
  return {};
}

// ------------------------------------------------------------------ ledger

struct LedgerRecord {
  mpz_class serial;
  std::size_t transcript_id = 0;
  mpz_class payee;
};

struct StoredDeposit {
  SpendTranscript transcript;
  std::string mu;  // depositor-supplied auxiliary data
};

struct DepositLedger {
  std::vector<LedgerRecord> records;  // append-only, one per accepted serial
  std::map<std::string, std::size_t> by_serial;
  std::vector<StoredDeposit> accepted;
  std::map<std::size_t, std::size_t> accepted_by_tid;

  const SpendTranscript* find_by_serial(const mpz_class& serial) const {
    auto it = by_serial.find(serial.get_str());
    if (it == by_serial.end()) return nullptr;
    auto at = accepted_by_tid.find(records[it->second].transcript_id);
    return at == accepted_by_tid.end() ? nullptr : &accepted[at->second].transcript;
  }
};

struct DoubleSpendReport {
  mpz_class upk;
  std::size_t prior_tid = 0, new_tid = 0;
  mpz_class serial;
};

// -------------------------------------------------------------- party state

enum class Role { bank, user, merchant, trader };

inline std::string role_name(Role r) {
  switch (r) {
    case Role::bank: return "bank";
    case Role::user: return "user";
    case Role::merchant: return "merchant";
    case Role::trader: return "trader";
  }
  return "?";
}

inline std::optional<Role> parse_role(std::string_view s) {
  if (s == "bank") return Role::bank;
  if (s == "user") return Role::user;
  if (s == "merchant") return Role::merchant;
  if (s == "trader") return Role::trader;
  return std::nullopt;
}

struct Message {
  std::size_t seq = 0;
  std::string from, to, type;
  std::vector<std::string> fields;
};

struct BankState {
  explicit BankState(AttributeKeyRing ring) : keys(std::move(ring)) {}

  AttributeKeyRing keys;
  std::map<std::string, RsaFdhSigner> signers;  // one live signing ledger per gamma
  DepositLedger ledger;
  std::set<std::pair<std::string, std::string>> payee_info_seen;  // (payee key, info)
  std::vector<DoubleSpendReport> reports;
  long withdrawn_total = 0;
  long deposited_total = 0;
  long accepted_count = 0;
  long rejected_count = 0;

  RsaFdhSigner& signer_for(const std::string& gamma) {
    auto it = signers.find(gamma);
    if (it != signers.end()) return it->second;
    return signers.try_emplace(gamma, keys.register_attribute(gamma)).first->second;
  }
};

struct TraderState {
  explicit TraderState(AttributeKeyRing ring) : keys(std::move(ring)) {}

  AttributeKeyRing keys;            // trader's own attribute keys for issued coins
  std::set<std::string> issued;     // serials of all trader coins ever issued
  std::set<std::string> spent;      // serials marked spent (online check)
  std::vector<Coin> reserve;        // bank coins backing the issued coins
  std::map<std::string, long> credit;  // value owed per party name
  long face_outstanding = 0;        // unredeemed trader-coin value still in wallets
  long fee_income = 0;
  long refusals = 0;

  long reserve_remaining() const {
    long sum = 0;
    for (const Coin& c : reserve) sum += c.remaining();
    return sum;
  }
  long credit_outstanding() const {
    long sum = 0;
    for (const auto& [who, v] : credit) sum += v;
    return sum;
  }
};

struct Party {
  std::string name;
  Role role = Role::user;
  mpz_class usk, upk;  // registration key in the simulation group
  std::vector<Coin> wallet;                 // bank coins
  std::vector<Coin> trader_coins;           // trader-issued coins
  std::vector<SpendTranscript> received;    // transcripts this party may deposit
  std::vector<SpendTranscript> sent;
  long balance = 0;                         // account credit from accepted deposits
  long trader_credit = 0;                   // value owed by a trader
  std::vector<Message> inbox;
  std::unique_ptr<BankState> bank;
  std::unique_ptr<TraderState> trader;

  long cash() const {
    long sum = 0;
    for (const Coin& c : wallet) sum += c.remaining();
    return sum;
  }
  long trader_cash() const {
    long sum = 0;
    for (const Coin& c : trader_coins) sum += c.remaining();
    return sum;
  }
};

// ----------------------------------------------------------------- harness

struct WithdrawResult {
  bool ok = false;
  std::size_t coin_index = 0;
};

enum class DepositStatus { accepted, rejected, reported };

struct DepositOutcome {
  DepositStatus status = DepositStatus::rejected;
  std::string reason;
  IdentifyResult ident;
  std::size_t prior_tid = 0;
};

class Sim {
 public:
  explicit Sim(std::uint64_t seed) : rng_(seed) {
    SeededRng group_rng = rng_.child("registration-group");
    group_ = gen_schnorr_group(32, 96, group_rng);
  }

  // ------------------------------------------------------------- parties

  Party& add_party(const std::string& name, Role role) {
    if (name.empty() || parties_.count(name)) throw ScenarioError("bad or duplicate party name");
    Party p;
    p.name = name;
    p.role = role;
    p.usk = rng_.range(1, group_.q - 1);
    p.upk = mod_exp(group_.g, p.usk, group_.p);
    if (role == Role::bank) {
      p.bank = std::make_unique<BankState>(
          AttributeKeyRing(96, 65537, rng_.child("issuer-keys|" + name)));
      banks_.push_back(name);
    }
    if (role == Role::trader)
      p.trader = std::make_unique<TraderState>(
          AttributeKeyRing(96, 65537, rng_.child("trader-keys|" + name)));
    order_.push_back(name);
    return parties_.emplace(name, std::move(p)).first->second;
  }

  Party& party(const std::string& name) {
    auto it = parties_.find(name);
    if (it == parties_.end()) throw ScenarioError("unknown party: " + name);
    return it->second;
  }
  const Party& party(const std::string& name) const {
    auto it = parties_.find(name);
    if (it == parties_.end()) throw ScenarioError("unknown party: " + name);
    return it->second;
  }
  Party& default_bank() {
    if (banks_.empty()) throw ScenarioError("no bank party registered");
    return party(banks_.front());
  }

  const SchnorrGroup& group() const { return group_; }
  void set_fee(long fee) {
    if (fee < 0) throw ScenarioError("fee must be nonnegative");
    fee_ = fee;
  }
  long fee() const { return fee_; }
  void set_day(long day) { day_ = day; }
  long day() const { return day_; }
  void tamper_next_withdraw() { tamper_withdraw_ = true; }

  // ------------------------------------------------------------ withdraw

  WithdrawResult withdraw(const std::string& bank_name, const std::string& user_name, long value,
                          long expiry_day) {
    Party& B = party(bank_name);
    Party& U = party(user_name);
    if (!B.bank) throw ScenarioError("withdraw: " + bank_name + " is not a bank");
    if (value < 1) throw ScenarioError("withdraw: value must be positive");

    Coin coin;
    coin.value = value;
    coin.expiry_day = expiry_day;
    coin.gamma = make_gamma(value, expiry_day);
    coin.sn_seed = rng_.uniform_bits(128);
    coin.tag_seed = rng_.uniform_bits(128);

    RsaFdhSigner& signer = B.bank->signer_for(coin.gamma);
    RsaBlindUserSession session(signer.public_key(), coin_message(coin.sn_seed));
    mpz_class m_blinded = session.blind(rng_);
    send(U.name, B.name, "withdraw-request",
         {"gamma=" + coin.gamma, "blinded=" + m_blinded.get_str()});

    mpz_class s_blinded = signer.sign_blinded(m_blinded);
    B.bank->withdrawn_total += value;
    if (tamper_withdraw_) {
      tamper_withdraw_ = false;
      s_blinded = mod_reduce(s_blinded + 1, signer.public_key().n);
    }
    send(B.name, U.name, "withdraw-response", {"signed=" + s_blinded.get_str()});

    try {
      coin.signature = session.unblind(s_blinded);
    } catch (const std::runtime_error&) {
      // distinguished abort: both sides roll back, no coin enters the wallet
      send(U.name, B.name, "withdraw-abort", {"gamma=" + coin.gamma});
      B.bank->withdrawn_total -= value;
      return {false, 0};
    }
    U.wallet.push_back(coin);
    return {true, U.wallet.size() - 1};
  }

  // --------------------------------------------------------------- spend

  SpendTranscript spend(const std::string& user_name, const std::string& merchant_name,
                        std::size_t coin_index, long V, const std::string& info) {
    Party& U = party(user_name);
    Party& M = party(merchant_name);
    Coin& coin = coin_at(U.wallet, coin_index, "spend");
    if (V < 1 || coin.spent + V > coin.value)
      throw ScenarioError("spend: insufficient remaining value");
    SpendTranscript t = make_transcript(U, coin, coin.spent, V, info, M);
    coin.spent += V;
    outstanding_ += V;
    deliver_spend(U, M, t, "spend");
    return t;
  }

  // Cheat driver: re-disclose an explicit serial range without advancing the
  // coin counter. Tags are still honestly computed, so identify() recovers
  // the replaying user's key at deposit time.
  SpendTranscript spend_replay(const std::string& user_name, const std::string& merchant_name,
                               std::size_t coin_index, long start, long V,
                               const std::string& info) {
    Party& U = party(user_name);
    Party& M = party(merchant_name);
    Coin& coin = coin_at(U.wallet, coin_index, "spend-replay");
    if (V < 1 || start < 0 || start + V > coin.value)
      throw ScenarioError("spend-replay: serial range exceeds coin value");
    SpendTranscript t = make_transcript(U, coin, start, V, info, M);
    deliver_spend(U, M, t, "spend-replay");
    return t;
  }

  // ------------------------------------------------------------- deposit

  DepositOutcome deposit(const std::string& payee_name, std::size_t received_index,
                         const std::string& mu = "") {
    Party& P = party(payee_name);
    Party& B = default_bank();
    BankState& S = *B.bank;
    if (received_index >= P.received.size())
      throw ScenarioError("deposit: no such received transcript");
    const SpendTranscript t = P.received[received_index];

    std::vector<std::string> fields = transcript_fields(t);
    fields.push_back("mu=" + mu);
    send(P.name, B.name, "deposit", fields);

    CheckReport rep = check_deposit(t, S.keys, day_, group_.q);
    if (!rep.valid) {
      ++S.rejected_count;
      send(B.name, P.name, "deposit-rejected", {"tid=" + std::to_string(t.id),
                                                "reason=" + rep.reason});
      return {DepositStatus::rejected, rep.reason, {}, 0};
    }
    auto key = std::pair<std::string, std::string>(t.payee.get_str(), t.info);
    if (S.payee_info_seen.count(key)) {
      ++S.rejected_count;
      send(B.name, P.name, "deposit-rejected",
           {"tid=" + std::to_string(t.id), "reason=info already deposited by this payee"});
      return {DepositStatus::rejected, "info already deposited by this payee", {}, 0};
    }
    for (const TagEntry& e : t.Z) {
      const SpendTranscript* prior = S.ledger.find_by_serial(e.serial);
      if (!prior) continue;
      IdentifyResult ir = identify(*prior, t, group_);
      S.reports.push_back({ir.upk, prior->id, t.id, e.serial});
      send(B.name, P.name, "double-spend-report",
           {"tid=" + std::to_string(t.id), "prior=" + std::to_string(prior->id),
            "kind=" + std::string(ir.kind == IdentifyKind::named ? "named" : "replay"),
            "upk=" + ir.upk.get_str()});
      return {DepositStatus::reported, "serial already deposited", ir, prior->id};
    }

    S.payee_info_seen.insert(key);
    for (const TagEntry& e : t.Z) {
      S.ledger.by_serial.emplace(e.serial.get_str(), S.ledger.records.size());
      S.ledger.records.push_back({e.serial, t.id, t.payee});
    }
    S.ledger.accepted_by_tid.emplace(t.id, S.ledger.accepted.size());
    S.ledger.accepted.push_back({t, mu});
    S.deposited_total += t.V;
    ++S.accepted_count;
    outstanding_ -= t.V;
    P.balance += t.V;
    send(B.name, P.name, "deposit-accepted",
         {"tid=" + std::to_string(t.id), "value=" + std::to_string(t.V)});
    return {DepositStatus::accepted, "", {}, 0};
  }

  // -------------------------------------------------------------- trader

  std::optional<std::size_t> trader_join(const std::string& party_name,
                                         const std::string& trader_name,
                                         std::size_t coin_index) {
    Party& P = party(party_name);
    Party& T = party(trader_name);
    if (!T.trader) throw ScenarioError("trader-join: " + trader_name + " is not a trader");
    TraderState& TS = *T.trader;
    Coin coin = coin_at(P.wallet, coin_index, "trader-join");  // copy before handover

    send(P.name, T.name, "join-request", coin_fields(coin));
    long W = coin.remaining();
    std::string refuse;
    if (W - fee_ < 1) refuse = "value does not cover fee";
    if (refuse.empty() && day_ > coin.expiry_day) refuse = "coin expired";
    if (refuse.empty() &&
        !rsa_verify(coin_message(coin.sn_seed), coin.signature,
                    default_bank().bank->keys.public_key_for(coin.gamma)))
      refuse = "issuer signature invalid";
    if (!refuse.empty()) {
      send(T.name, P.name, "join-refused", {"reason=" + refuse});
      return std::nullopt;
    }

    P.wallet.erase(P.wallet.begin() + static_cast<std::ptrdiff_t>(coin_index));
    TS.reserve.push_back(coin);
    long face = W - fee_;
    TS.fee_income += fee_;
    TS.face_outstanding += face;

    Coin tc;
    tc.value = face;
    tc.expiry_day = coin.expiry_day;
    tc.gamma = make_gamma(face, coin.expiry_day);
    tc.sn_seed = rng_.uniform_bits(128);
    tc.tag_seed = rng_.uniform_bits(128);
    tc.signature = rsa_sign(coin_message(tc.sn_seed), TS.keys.register_attribute(tc.gamma));
    for (long j = 0; j < face; ++j)
      TS.issued.insert(serial_at(tc.sn_seed, static_cast<unsigned long>(j)).get_str());

    send(T.name, P.name, "trader-coin", coin_fields(tc));
    P.trader_coins.push_back(tc);
    return P.trader_coins.size() - 1;
  }

  bool trader_spend(const std::string& user_name, const std::string& merchant_name,
                    const std::string& trader_name, std::size_t tcoin_index, long V) {
    Party& U = party(user_name);
    Coin& tc = coin_at(U.trader_coins, tcoin_index, "trader-spend");
    if (V < 1 || tc.spent + V > tc.value)
      throw ScenarioError("trader-spend: insufficient remaining value");
    bool ok = trader_purchase(U, merchant_name, trader_name, tc, tc.spent, V);
    if (ok) tc.spent += V;
    return ok;
  }

  // Cheat driver: present an explicit serial range again. The trader's local
  // database refuses synchronously, before the merchant ships.
  bool trader_spend_replay(const std::string& user_name, const std::string& merchant_name,
                           const std::string& trader_name, std::size_t tcoin_index, long start,
                           long V) {
    Party& U = party(user_name);
    Coin& tc = coin_at(U.trader_coins, tcoin_index, "trader-spend-replay");
    if (V < 1 || start < 0 || start + V > tc.value)
      throw ScenarioError("trader-spend-replay: serial range exceeds coin value");
    return trader_purchase(U, merchant_name, trader_name, tc, start, V);
  }

  // Settles everything the party holds with the trader (unspent trader-coin
  // value plus earned credit) minus one fee, paid as spend transcripts drawn
  // from the reserve; the party deposits those at the bank.
  long trader_redeem(const std::string& party_name, const std::string& trader_name) {
    Party& P = party(party_name);
    Party& T = party(trader_name);
    if (!T.trader) throw ScenarioError("trader-redeem: " + trader_name + " is not a trader");
    TraderState& TS = *T.trader;

    long coin_value = 0;
    for (const Coin& tc : P.trader_coins) coin_value += tc.remaining();
    long credit = 0;
    if (auto it = TS.credit.find(P.name); it != TS.credit.end()) credit = it->second;
    long amount = coin_value + credit;
    send(P.name, T.name, "redeem-request",
         {"coins=" + std::to_string(P.trader_coins.size()),
          "coin_value=" + std::to_string(coin_value), "credit=" + std::to_string(credit)});

    long pay = amount - fee_;
    if (pay < 1 || pay > TS.reserve_remaining()) {
      std::string reason = pay < 1 ? "amount does not cover fee" : "trader insolvent";
      send(T.name, P.name, "redeem-refused", {"reason=" + reason});
      return -1;
    }

    // retire the returned trader coins
    for (const Coin& tc : P.trader_coins)
      for (long j = tc.spent; j < tc.value; ++j)
        TS.spent.insert(serial_at(tc.sn_seed, static_cast<unsigned long>(j)).get_str());
    TS.face_outstanding -= coin_value;
    TS.credit[P.name] = 0;
    P.trader_credit = 0;
    P.trader_coins.clear();
    TS.fee_income += fee_;

    long need = pay;
    for (Coin& rc : TS.reserve) {
      if (need == 0) break;
      long avail = rc.remaining();
      if (avail == 0) continue;
      long take = std::min(avail, need);
      SpendTranscript t =
          make_transcript(T, rc, rc.spent, take, "redeem|" + std::to_string(tseq_), P);
      rc.spent += take;
      outstanding_ += take;
      need -= take;
      std::vector<std::string> fields = transcript_fields(t);
      send(T.name, P.name, "redeem-payment", fields);
      P.received.push_back(t);
      T.sent.push_back(t);
    }
    send(T.name, P.name, "redeem-done",
         {"paid=" + std::to_string(pay), "fee=" + std::to_string(fee_)});
    return pay;
  }

  // ----------------------------------------------------- trace & invariants

  void phase(const std::string& label) {
    trace_.push_back("== " + label);
    phase_bank_msgs_[label] = bank_msgs_;
  }

  void note(const std::string& line) { trace_.push_back(line); }

  const std::vector<std::string>& trace() const { return trace_; }
  std::size_t bank_messages_total() const { return bank_msgs_; }
  std::size_t bank_messages_since(const std::string& label) const {
    auto it = phase_bank_msgs_.find(label);
    if (it == phase_bank_msgs_.end()) throw ScenarioError("unknown phase: " + label);
    return bank_msgs_ - it->second;
  }

  // Bank-coin value identity: everything withdrawn is either unspent in a
  // wallet or reserve, already deposited, or disclosed but not yet deposited.
  bool conservation_holds() const {
    long withdrawn = 0, deposited = 0, coins = 0;
    for (const auto& [name, p] : parties_) {
      for (const Coin& c : p.wallet) coins += c.remaining();
      if (p.bank) {
        withdrawn += p.bank->withdrawn_total;
        deposited += p.bank->deposited_total;
      }
      if (p.trader)
        for (const Coin& c : p.trader->reserve) coins += c.remaining();
    }
    return withdrawn == coins + deposited + outstanding_;
  }

  // Trader fee identity: the reserve exactly backs outstanding trader coins,
  // outstanding credit, and collected fees.
  bool trader_solvent(const std::string& trader_name) const {
    const Party& T = party(trader_name);
    if (!T.trader) throw ScenarioError("trader-solvent: " + trader_name + " is not a trader");
    const TraderState& TS = *T.trader;
    return TS.reserve_remaining() ==
           TS.face_outstanding + TS.credit_outstanding() + TS.fee_income;
  }

  std::vector<std::string> ledger_summary() const {
    std::vector<std::string> out;
    for (const std::string& name : order_) {
      const Party& p = party(name);
      if (p.bank) {
        const BankState& S = *p.bank;
        out.push_back("bank " + name + " withdrawn=" + std::to_string(S.withdrawn_total) +
                      " deposited=" + std::to_string(S.deposited_total) +
                      " accepted=" + std::to_string(S.accepted_count) +
                      " rejected=" + std::to_string(S.rejected_count) +
                      " reports=" + std::to_string(S.reports.size()));
      } else if (p.trader) {
        const TraderState& TS = *p.trader;
        out.push_back("trader " + name + " reserve=" + std::to_string(TS.reserve_remaining()) +
                      " face=" + std::to_string(TS.face_outstanding) +
                      " credit=" + std::to_string(TS.credit_outstanding()) +
                      " fees=" + std::to_string(TS.fee_income) +
                      " refusals=" + std::to_string(TS.refusals));
      } else {
        out.push_back("party " + name + " role=" + role_name(p.role) +
                      " cash=" + std::to_string(p.cash()) +
                      " tcash=" + std::to_string(p.trader_cash()) +
                      " credit=" + std::to_string(p.trader_credit) +
                      " balance=" + std::to_string(p.balance) + " upk=" + p.upk.get_str());
      }
    }
    return out;
  }

  long outstanding_value() const { return outstanding_; }
  SeededRng& rng() { return rng_; }

 private:
  Coin& coin_at(std::vector<Coin>& coins, std::size_t index, const std::string& who) {
    if (index >= coins.size()) throw ScenarioError(who + ": no such coin");
    return coins[index];
  }

  SpendTranscript make_transcript(Party& spender, const Coin& coin, long start, long V,
                                  const std::string& info, const Party& payee) {
    SpendTranscript t;
    t.id = tseq_++;
    t.V = V;
    t.info = info;
    t.payee = payee.upk;
    t.gamma = coin.gamma;
    t.seed = coin.sn_seed;
    t.signature = coin.signature;
    t.start = start;
    for (long j = 0; j < V; ++j) {
      mpz_class sn = serial_at(coin.sn_seed, static_cast<unsigned long>(start + j));
      mpz_class h = link_point(payee.upk, info, sn, group_.q);
      mpz_class k = tag_key(coin.tag_seed, sn, group_.q);
      t.Z.push_back({sn, mod_reduce(spender.usk * h + k, group_.q)});
    }
    return t;
  }

  std::vector<std::string> transcript_fields(const SpendTranscript& t) const {
    std::string serials, tags;
    for (const TagEntry& e : t.Z) {
      if (!serials.empty()) serials.push_back(',');
      serials += e.serial.get_str();
      if (!tags.empty()) tags.push_back(',');
      tags += e.tag.get_str();
    }
    return {"tid=" + std::to_string(t.id),       "V=" + std::to_string(t.V),
            "info=" + t.info,                    "serials=" + serials,
            "tags=" + tags,                      "gamma=" + t.gamma,
            "seed=" + t.seed.get_str(),          "sig=" + t.signature.get_str(),
            "start=" + std::to_string(t.start)};
  }

  std::vector<std::string> coin_fields(const Coin& c) const {
    return {"value=" + std::to_string(c.value),  "expiry=" + std::to_string(c.expiry_day),
            "gamma=" + c.gamma,                  "sn_seed=" + c.sn_seed.get_str(),
            "tag_seed=" + c.tag_seed.get_str(),  "sig=" + c.signature.get_str(),
            "spent=" + std::to_string(c.spent)};
  }

  void deliver_spend(Party& U, Party& M, const SpendTranscript& t, const std::string& type) {
    send(U.name, M.name, type, transcript_fields(t));
    // merchant-side structural check on the public fields only
    std::set<std::string> distinct;
    for (const TagEntry& e : t.Z) distinct.insert(e.serial.get_str());
    if (distinct.size() != t.Z.size() || static_cast<long>(t.Z.size()) != t.V) {
      send(M.name, U.name, "spend-reject", {"tid=" + std::to_string(t.id)});
      throw ScenarioError("spend: malformed transcript");
    }
    M.received.push_back(t);
    U.sent.push_back(t);
    send(M.name, U.name, "spend-ack", {"tid=" + std::to_string(t.id)});
  }

  bool trader_purchase(Party& U, const std::string& merchant_name,
                       const std::string& trader_name, const Coin& tc, long start, long V) {
    Party& M = party(merchant_name);
    Party& T = party(trader_name);
    if (!T.trader) throw ScenarioError("trader-spend: " + trader_name + " is not a trader");
    TraderState& TS = *T.trader;

    std::string order = "om|" + rng_.uniform_bits(64).get_str();
    send(M.name, U.name, "order", {"order=" + order, "value=" + std::to_string(V)});

    std::vector<mpz_class> serials;
    std::string joined;
    for (long j = 0; j < V; ++j) {
      serials.push_back(serial_at(tc.sn_seed, static_cast<unsigned long>(start + j)));
      if (!joined.empty()) joined.push_back(',');
      joined += serials.back().get_str();
    }
    send(U.name, T.name, "tspend-request", {"order=" + order, "serials=" + joined});

    for (const mpz_class& sn : serials) {
      std::string key = sn.get_str();
      if (!TS.issued.count(key) || TS.spent.count(key)) {
        ++TS.refusals;
        send(T.name, U.name, "tspend-refused", {"order=" + order, "reason=serial already spent"});
        send(U.name, M.name, "tspend-cancel", {"order=" + order});
        return false;
      }
    }
    for (const mpz_class& sn : serials) TS.spent.insert(sn.get_str());

    std::string to_sign = "order|" + order + "|" + joined + "|" + M.upk.get_str();
    SchnorrKeyPair tkey{group_, T.usk, T.upk};
    SchnorrSignature sig = schnorr_sign(to_sign, tkey, rng_);
    TS.face_outstanding -= V;
    TS.credit[M.name] += V;
    send(T.name, U.name, "tspend-ok", {"order=" + order, "R=" + sig.R.get_str(),
                                       "s=" + sig.s.get_str()});
    send(U.name, M.name, "tspend-proof",
         {"order=" + order, "serials=" + joined, "R=" + sig.R.get_str(),
          "s=" + sig.s.get_str()});

    if (!schnorr_verify(to_sign, sig, SchnorrPublicKey{group_, T.upk}))
      throw ScenarioError("trader-spend: trader signature failed verification");
    M.trader_credit += V;
    send(M.name, U.name, "tspend-done", {"order=" + order});
    return true;
  }

  void send(const std::string& from, const std::string& to, const std::string& type,
            std::vector<std::string> fields) {
    Message m{msg_seq_++, from, to, type, std::move(fields)};
    std::string line = "#" + std::to_string(m.seq) + " " + from + "->" + to + " " + type;
    for (const std::string& f : m.fields) {
      line.push_back(' ');
      line += f;
    }
    trace_.push_back(line);
    if (party(from).role == Role::bank || party(to).role == Role::bank) ++bank_msgs_;
    party(to).inbox.push_back(std::move(m));
  }

  SeededRng rng_;
  SchnorrGroup group_;
  std::map<std::string, Party> parties_;
  std::vector<std::string> order_;
  std::vector<std::string> banks_;
  std::vector<std::string> trace_;
  std::map<std::string, std::size_t> phase_bank_msgs_;
  std::size_t msg_seq_ = 0;
  std::size_t tseq_ = 0;
  std::size_t bank_msgs_ = 0;
  long fee_ = 0;
  long day_ = 0;
  long outstanding_ = 0;
  bool tamper_withdraw_ = false;
};

}  // namespace bsw::ecash
