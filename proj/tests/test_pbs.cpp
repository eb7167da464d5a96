#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>

#include "bsw/pbs.hpp"
#include "bsw/ring.hpp"
#include "bsw/rng.hpp"
#include "bsw/serialize.hpp"

using namespace bsw;
using namespace bsw::pbs;
using ring::RingElement;
using ring::RingMat;
using ring::RingVec;

namespace {

struct Session {
  CommitKey ckey;
  RingElement I;
  BdlopCommitment com;
  RingMat R;
  IssuanceKeys ikeys;
  RingVec e;
};

Session run_session(const PbsParams& P, SeededRng& rng, const std::string& msg,
                    const std::string& gamma = "", GammaHash mode = GammaHash::zero_stub) {
  Session s;
  s.ckey = bdlop_keygen(P, rng);
  s.I = ring::ring_message(msg, P.d, P.q);
  std::tie(s.com, s.R) = bdlop_commit(s.I, s.ckey, rng);
  s.ikeys = partial_issuance_keygen_testmode(s.com.t1, gamma, P, rng, mode);
  s.e = partial_blind_issue_testmode(s.com.t1, gamma, s.ikeys);
  return s;
}

}  // namespace

TEST_CASE("gadget vector matches the base-2^ceil(log2 q / k) ladder") {
  PbsParams toy = pbs_toy_params();
  CHECK(toy.gadget() == std::vector<long>{1, 16});  // q = 97, k = 2, B = 16

  PbsParams bigger{16, 3329, 2};
  bigger.validate();
  CHECK(bigger.gadget() == std::vector<long>{1, 64});

  PbsParams three{8, 97, 3};
  three.validate();
  CHECK(three.gadget() == std::vector<long>{1, 8, 64});

  PbsParams bad{8, 97, 0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("commitment with zero randomness exposes the gadget rows") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(31);
  CommitKey key = bdlop_keygen(P, rng);
  RingElement I = ring::ring_message("plain sight", P.d, P.q);
  RingMat zeroR(P.k, RingVec(P.k, ring::ring_zero(P.d, P.q)));
  BdlopCommitment com = bdlop_commit_with_randomness(I, key, zeroR);
  CHECK(com.t0 == ring::ring_vec_zero(P.k, P.d, P.q));
  CHECK(com.t1 == gadget_times(I, P));
  CHECK(com.t1[0] == I);                        // gadget entry 1 copies the message
  CHECK(com.t1[1] == ring::scalar_mul(16, I));  // gadget entry 16 scales it
  CHECK(bdlop_open_check(com, I, zeroR, key));
}

TEST_CASE("honest commitments open; wrong message or randomness is rejected") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(32);
  for (int t = 0; t < 100; ++t) {
    CommitKey key = bdlop_keygen(P, rng);
    RingElement I = ring::uniform_element(P.d, P.q, rng);
    auto [com, R] = bdlop_commit(I, key, rng);
    REQUIRE(bdlop_open_check(com, I, R, key));
  }

  CommitKey key = bdlop_keygen(P, rng);
  RingElement I = ring::ring_message("the real message", P.d, P.q);
  auto [com, R] = bdlop_commit(I, key, rng);
  for (int t = 0; t < 1000; ++t) {
    RingElement fake = ring::uniform_element(P.d, P.q, rng);
    if (fake == I) continue;
    REQUIRE_FALSE(bdlop_open_check(com, fake, R, key));
  }

  RingMat wideR = R;
  wideR[0][0] = ring::ring_const(P.d, P.q, 2);  // not ternary
  CHECK_FALSE(bdlop_open_check(com, I, wideR, key));
  RingMat shortR(P.k - 1, RingVec(P.k, ring::ring_zero(P.d, P.q)));
  CHECK_FALSE(bdlop_open_check(com, I, shortR, key));
}

TEST_CASE("test-mode issuance publishes a short response satisfying its equation") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(33);
  for (int t = 0; t < 100; ++t) {
    CommitKey ckey = bdlop_keygen(P, rng);
    RingElement I = ring::uniform_element(P.d, P.q, rng);
    auto [com, R] = bdlop_commit(I, ckey, rng);
    IssuanceKeys keys = issuance_keygen_testmode(com.t1, P, rng);
    RingVec e = issuance_sign_testmode(com.t1, keys);
    REQUIRE(e.size() == 2 * P.k);
    REQUIRE(ring::inf_norm_centered(e) <= 1);

    // recheck the equation by direct arithmetic on the published pieces
    RingElement lhs = ring::ring_zero(P.d, P.q);
    for (unsigned i = 0; i < P.k; ++i) lhs = lhs + keys.a1[i] * e[i];
    for (unsigned i = 0; i < P.k; ++i) lhs = lhs + (keys.a2[i] + com.t1[i]) * e[P.k + i];
    REQUIRE(lhs == keys.u);
  }

  // keys are bound to the session commitment they were generated for
  CommitKey ckey = bdlop_keygen(P, rng);
  RingElement I = ring::uniform_element(P.d, P.q, rng);
  auto [com, R] = bdlop_commit(I, ckey, rng);
  IssuanceKeys keys = issuance_keygen_testmode(com.t1, P, rng);
  RingVec other = ring::ring_vec_zero(P.k, P.d, P.q);
  CHECK_THROWS_AS(issuance_sign_testmode(other, keys), std::logic_error);
}

TEST_CASE("unblinding produces a bundle satisfying the revealed-witness relation") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(34);
  for (int t = 0; t < 1000; ++t) {
    Session s = run_session(P, rng, "coin " + std::to_string(t));
    BlindIssuanceBundle bundle = unblind_transform(s.e, s.com, s.R, s.I, s.ikeys, s.ckey);
    REQUIRE(bundle.statement.size() == 3 * P.k);
    REQUIRE(bundle.witness.size() == 3 * P.k);
    REQUIRE(ring::dot(bundle.statement, bundle.witness) == s.ikeys.u);
    REQUIRE(ring::inf_norm_centered(bundle.witness) <= bundle.norm_bound);
    REQUIRE(transparent_verify(bundle, s.ikeys.u, bundle.norm_bound));
  }
}

TEST_CASE("zero commitment randomness collapses the witness tail to zero") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(35);
  CommitKey ckey = bdlop_keygen(P, rng);
  RingElement I = ring::ring_message("no blinding", P.d, P.q);
  RingMat zeroR(P.k, RingVec(P.k, ring::ring_zero(P.d, P.q)));
  BdlopCommitment com = bdlop_commit_with_randomness(I, ckey, zeroR);
  IssuanceKeys keys = issuance_keygen_testmode(com.t1, P, rng);
  RingVec e = issuance_sign_testmode(com.t1, keys);
  BlindIssuanceBundle bundle = unblind_transform(e, com, zeroR, I, keys, ckey);
  for (unsigned i = 0; i < P.k; ++i)
    CHECK(bundle.witness[2 * P.k + i] == ring::ring_zero(P.d, P.q));
  CHECK(transparent_verify(bundle, keys.u, bundle.norm_bound));
}

TEST_CASE("unblinding rejects corrupted responses and mismatched openings") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(36);
  Session s = run_session(P, rng, "tamper target");

  RingVec bad_e = s.e;
  bad_e[0] = bad_e[0] + ring::ring_const(P.d, P.q, 1);
  CHECK_THROWS_AS(unblind_transform(bad_e, s.com, s.R, s.I, s.ikeys, s.ckey),
                  std::invalid_argument);

  RingElement wrong_I = s.I + ring::ring_const(P.d, P.q, 1);
  CHECK_THROWS_AS(unblind_transform(s.e, s.com, s.R, wrong_I, s.ikeys, s.ckey),
                  std::invalid_argument);

  RingMat wrong_R = s.R;
  wrong_R[0][0] = wrong_R[0][0] + ring::ring_const(P.d, P.q, 1);
  CHECK_THROWS_AS(unblind_transform(s.e, s.com, wrong_R, s.I, s.ikeys, s.ckey),
                  std::invalid_argument);

  RingVec short_e(s.e.begin(), s.e.begin() + P.k);
  CHECK_THROWS_AS(unblind_transform(short_e, s.com, s.R, s.I, s.ikeys, s.ckey),
                  std::invalid_argument);
}

TEST_CASE("both transformation identities hold when checked independently") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(37);
  for (int t = 0; t < 200; ++t) {
    Session s = run_session(P, rng, "identity " + std::to_string(t));
    RingVec e2(s.e.begin() + P.k, s.e.end());
    RingVec Re2 = ring::mat_times_col(s.R, e2);
    RingVec Ig = gadget_times(s.I, P);

    // forward: [a1 | a2 + I*g | b1] . [e1 | e2 | R e2] equals the blinded value
    RingElement forward = ring::ring_zero(P.d, P.q);
    for (unsigned i = 0; i < P.k; ++i) forward = forward + s.ikeys.a1[i] * s.e[i];
    for (unsigned i = 0; i < P.k; ++i)
      forward = forward + (s.ikeys.a2[i] + Ig[i]) * s.e[P.k + i];
    for (unsigned i = 0; i < P.k; ++i) forward = forward + s.ckey.b1[i] * Re2[i];
    REQUIRE(forward == s.ikeys.u);

    // reverse: [a1 | a2 + I*g] . e equals [a1 | a2 + t1 | b1] . [e | -R e2]
    RingElement left = ring::ring_zero(P.d, P.q);
    for (unsigned i = 0; i < P.k; ++i) left = left + s.ikeys.a1[i] * s.e[i];
    for (unsigned i = 0; i < P.k; ++i) left = left + (s.ikeys.a2[i] + Ig[i]) * s.e[P.k + i];
    RingElement right = ring::ring_zero(P.d, P.q);
    for (unsigned i = 0; i < P.k; ++i) right = right + s.ikeys.a1[i] * s.e[i];
    for (unsigned i = 0; i < P.k; ++i)
      right = right + (s.ikeys.a2[i] + s.com.t1[i]) * s.e[P.k + i];
    for (unsigned i = 0; i < P.k; ++i) right = right - s.ckey.b1[i] * Re2[i];
    REQUIRE(left == right);
  }
}

TEST_CASE("transparent verification enforces both the equation and the norm bound") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(38);
  Session s = run_session(P, rng, "verify me");
  BlindIssuanceBundle bundle = unblind_transform(s.e, s.com, s.R, s.I, s.ikeys, s.ckey);
  long bound = default_norm_bound(P);
  CHECK(bound == 16);
  CHECK(transparent_verify(bundle, s.ikeys.u, bound));

  // norm gate: same valid equation fails under a bound below the witness norm
  long norm = ring::inf_norm_centered(bundle.witness);
  CHECK(norm >= 1);
  CHECK_FALSE(transparent_verify(bundle, s.ikeys.u, norm - 1));

  // equation gate: doubling the witness misses the target no matter the bound
  BlindIssuanceBundle doubled = bundle;
  for (auto& w : doubled.witness) w = ring::scalar_mul(2, w);
  CHECK_FALSE(transparent_verify(doubled, s.ikeys.u, P.q));

  // random short witnesses essentially never satisfy the equation
  for (int t = 0; t < 1000; ++t) {
    BlindIssuanceBundle forged = bundle;
    for (auto& w : forged.witness) w = ring::ternary_element(P.d, P.q, rng);
    REQUIRE_FALSE(transparent_verify(forged, s.ikeys.u, bound));
  }

  BlindIssuanceBundle ragged = bundle;
  ragged.witness.pop_back();
  CHECK_FALSE(transparent_verify(ragged, s.ikeys.u, bound));
}

TEST_CASE("zero-stub common-message hash reproduces the base scheme bit for bit") {
  PbsParams P = pbs_toy_params();
  CHECK(gamma_hash("anything", P, GammaHash::zero_stub) == ring::ring_zero(P.d, P.q));
  CHECK(gamma_hash("x", P, GammaHash::real) != ring::ring_zero(P.d, P.q));

  SeededRng base_rng(39), stub_rng(39);
  Session base = run_session(P, base_rng, "same coin", "", GammaHash::zero_stub);
  Session stub = run_session(P, stub_rng, "same coin", "ignored info", GammaHash::zero_stub);
  CHECK(base.ikeys.a1 == stub.ikeys.a1);
  CHECK(base.ikeys.a2 == stub.ikeys.a2);
  CHECK(base.ikeys.u == stub.ikeys.u);
  CHECK(base.e == stub.e);
  BlindIssuanceBundle bb = unblind_transform(base.e, base.com, base.R, base.I, base.ikeys, base.ckey);
  BlindIssuanceBundle sb = unblind_transform(stub.e, stub.com, stub.R, stub.I, stub.ikeys, stub.ckey);
  CHECK(bb.statement == sb.statement);
  CHECK(bb.witness == sb.witness);
}

TEST_CASE("partially blind sessions bind the bundle to the common message") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(40);
  for (int t = 0; t < 100; ++t) {
    std::string gamma = "denom=" + std::to_string(1 << (t % 5)) + " expiry=" + std::to_string(t);
    Session s = run_session(P, rng, "note " + std::to_string(t), gamma, GammaHash::real);
    BlindIssuanceBundle bundle = unblind_transform(s.e, s.com, s.R, s.I, s.ikeys, s.ckey);
    REQUIRE(transparent_verify_gamma(bundle, s.ikeys.u, gamma, bundle.norm_bound));
    REQUIRE_FALSE(
        transparent_verify_gamma(bundle, s.ikeys.u, gamma + " forged", bundle.norm_bound));
  }

  // the signer refuses to answer for a different common message
  Session s = run_session(P, rng, "note", "agreed info", GammaHash::real);
  CHECK_THROWS_AS(partial_blind_issue_testmode(s.com.t1, "other info", s.ikeys), std::logic_error);
}

TEST_CASE("bundles survive a file round trip") {
  PbsParams P = pbs_toy_params();
  SeededRng rng(41);
  Session s = run_session(P, rng, "persist me");
  BlindIssuanceBundle bundle = unblind_transform(s.e, s.com, s.R, s.I, s.ikeys, s.ckey);

  write_bundle("pbs_bundle.txt", bundle);
  BlindIssuanceBundle loaded = read_bundle("pbs_bundle.txt");
  CHECK(loaded.params == bundle.params);
  CHECK(loaded.norm_bound == bundle.norm_bound);
  CHECK(loaded.statement == bundle.statement);
  CHECK(loaded.witness == bundle.witness);
  CHECK(transparent_verify(loaded, s.ikeys.u, loaded.norm_bound));

  write_text_file("pbs_bad.txt", "pbs-bundle v2", {"8 97 2 16"});
  CHECK_THROWS_AS(read_bundle("pbs_bad.txt"), std::runtime_error);

  for (const char* f : {"pbs_bundle.txt", "pbs_bad.txt"}) std::remove(f);
}
