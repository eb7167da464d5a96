#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>

#include "bsw/core_math.hpp"
#include "bsw/fs_sig.hpp"
#include "bsw/rng.hpp"

using namespace bsw;
using namespace bsw::fs;

TEST_CASE("high/low decomposition: worked case, multiples, exhaustive reconstruction") {
  auto [high, low] = highlow(13, 2);
  CHECK(high == 3);
  CHECK(low == 1);

  for (long v : {0L, 4L, 32L, 4096L}) {
    auto [h, l] = highlow(v, 2);
    CHECK(l == 0);
    CHECK(h * 4 == v);
  }

  for (long v = 0; v < 257; ++v) {
    auto [h, l] = highlow(v, 3);
    CHECK(h * 8 + l == v);
    CHECK(2 * l <= 8);
    CHECK(2 * l > -8);
  }

  ZVec vec = {13, 8, 0, 255};
  CHECK(high_bits(vec, 2) == ZVec{3, 2, 0, 64});
  CHECK(low_bits(vec, 2) == ZVec{1, 0, 0, -1});
}

TEST_CASE("key generation satisfies its own invariants deterministically") {
  FsParams P = fs_toy_params();
  SeededRng a(4), b(4);
  FsKeyPair ka = fs_keygen(P, a);
  FsKeyPair kb = fs_keygen(P, b);
  CHECK(ka.A == kb.A);
  CHECK(ka.s1 == kb.s1);
  CHECK(ka.t == kb.t);
  CHECK_NOTHROW(ka.validate());

  SeededRng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    FsKeyPair k = fs_keygen(P, rng);
    CHECK(inf_norm(k.s1) <= P.eta);
    CHECK(inf_norm(k.s2) <= P.eta);
    // spot-check the t equation on one entry per key
    mpz_class acc = 0;
    for (std::size_t j = 0; j < P.n; ++j) acc += k.A[0][j] * k.s1[j][0];
    CHECK(k.t[0][0] == mod_reduce(acc + k.s2[0][0], P.q));
  }
}

TEST_CASE("parameter validation rejects inconsistent sets") {
  FsParams P = fs_toy_params();
  FsParams bad = P;
  bad.beta = bad.gamma;  // need gamma > beta
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = P;
  bad.q = 4 * bad.gamma;  // need q > 4*gamma
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = P;
  bad.D = 12;  // analytic High-flip rate over 1%
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = P;
  bad.w = 9;  // weight above challenge length
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = P;
  bad.eta = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("challenges are deterministic, well formed, and message separated") {
  FsParams P = fs_toy_params();
  ZVec high = {1, 2, 3, 4, 5, 6, 7, 8};
  ZVec c1 = fs_challenge(high, "msg", P);
  ZVec c2 = fs_challenge(high, "msg", P);
  CHECK(c1 == c2);
  CHECK(challenge_well_formed(c1, P));
  ZVec c3 = fs_challenge(high, "other", P);
  CHECK(challenge_well_formed(c3, P));
  CHECK(c1 != c3);
  ZVec high2 = high;
  high2[0] += 1;
  CHECK(fs_challenge(high2, "msg", P) != c1);
}

TEST_CASE("one thousand signatures round-trip with no verification failures") {
  FsParams P = fs_toy_params();
  SeededRng key_rng(7);
  FsKeyPair key = fs_keygen(P, key_rng);
  FsPublicKey pub = key.public_key();
  SeededRng rng(12);
  unsigned long total_attempts = 0, total_high_restarts = 0;
  mpz_class margin = P.gamma - P.beta;
  for (int i = 0; i < 1000; ++i) {
    std::string msg = "message " + std::to_string(i);
    FsSignResult r = fs_sign(msg, key, rng);
    total_attempts += r.attempts;
    total_high_restarts += r.high_restarts;
    CHECK(inf_norm(r.sig.z) <= margin);
    CHECK(challenge_well_formed(r.sig.c, P));
    CHECK(fs_verify(msg, r.sig, pub));
  }
  // acceptance rate is positive by construction; report restart behavior
  double acceptance = 1000.0 / static_cast<double>(total_attempts);
  INFO("acceptance rate " << acceptance << ", high restarts " << total_high_restarts << " of "
                          << total_attempts << " attempts");
  CHECK(acceptance > 0.0);
  CHECK(total_high_restarts * 100 < total_attempts);  // measured High-flip rate below 1%
}

TEST_CASE("signing identity holds exactly when secrets are known") {
  FsParams P = fs_toy_params();
  SeededRng key_rng(17);
  FsKeyPair key = fs_keygen(P, key_rng);
  SeededRng rng(23);
  for (int i = 0; i < 50; ++i) {
    std::string msg = "identity " + std::to_string(i);
    FsSignature sig = fs_sign(msg, key, rng).sig;
    // recover the mask and check A z - t c = A y - s2 c mod q entrywise
    ZVec s1c = mat_vec(key.s1, sig.c);
    ZVec y(P.n);
    for (std::size_t j = 0; j < P.n; ++j) y[j] = sig.z[j] - s1c[j];
    ZVec az = mat_vec(key.A, sig.z);
    ZVec tc = mat_vec(key.t, sig.c);
    ZVec ay = mat_vec(key.A, y);
    ZVec s2c = mat_vec(key.s2, sig.c);
    for (std::size_t i2 = 0; i2 < P.m; ++i2)
      CHECK(mod_reduce(az[i2] - tc[i2], P.q) == mod_reduce(ay[i2] - s2c[i2], P.q));
  }
}

TEST_CASE("zero-secret key signs in one attempt with the mask as response") {
  FsParams P = fs_toy_params();
  SeededRng key_rng(3);
  FsKeyPair key = fs_keygen(P, key_rng);
  key.s1 = ZMat(P.n, ZVec(P.kc, 0));
  key.s2 = ZMat(P.m, ZVec(P.kc, 0));
  key.t = lat::mat_mul(key.A, key.s1);  // all zero
  CHECK_NOTHROW(key.validate());
  SeededRng rng(41);
  SeededRng shadow(41);  // replays the same mask draws
  for (int i = 0; i < 100; ++i) {
    FsSignResult r = fs_sign("degenerate " + std::to_string(i), key, rng);
    CHECK(r.attempts == 1);
    CHECK(r.high_restarts == 0);
    ZVec y(P.n);
    for (auto& v : y) v = shadow.range(-P.gamma, P.gamma);
    CHECK(r.sig.z == y);  // z = y exactly
    CHECK(fs_verify("degenerate " + std::to_string(i), r.sig, key.public_key()));
  }
}

TEST_CASE("verification rejects mutated signatures and out-of-bound responses") {
  FsParams P = fs_toy_params();
  SeededRng key_rng(31);
  FsKeyPair key = fs_keygen(P, key_rng);
  FsPublicKey pub = key.public_key();
  SeededRng rng(37);
  unsigned rejected = 0;
  const unsigned trials = 200;
  for (unsigned i = 0; i < trials; ++i) {
    std::string msg = "target " + std::to_string(i);
    FsSignature sig = fs_sign(msg, key, rng).sig;
    REQUIRE(fs_verify(msg, sig, pub));
    FsSignature bad = sig;
    bad.z[i % P.n] += 1 + static_cast<long>(i % 3);
    if (!fs_verify(msg, bad, pub)) ++rejected;
  }
  CHECK(rejected == trials);

  FsSignature sig = fs_sign("bound case", key, rng).sig;
  FsSignature swapped = sig;
  for (auto& v : swapped.c) v = -v;  // valid weight, wrong hash
  CHECK_FALSE(fs_verify("bound case", swapped, pub));
  CHECK_FALSE(fs_verify("different message", sig, pub));

  FsSignature fat = sig;
  fat.z[0] = P.gamma - P.beta + 1;  // over the bound: rejected before any hashing
  CHECK_FALSE(fs_verify("bound case", fat, pub));
  FsSignature heavy = sig;
  heavy.c[0] = 2;  // malformed challenge entry
  CHECK_FALSE(fs_verify("bound case", heavy, pub));
}

TEST_CASE("infeasible rejection loops surface as an error") {
  FsParams P = fs_toy_params();
  P.gamma = 16;
  P.q = 8380417;
  P.validate();  // legal but hopeless: Low(u) almost never fits under gamma - beta
  SeededRng key_rng(5);
  FsKeyPair key = fs_keygen(P, key_rng);
  SeededRng rng(6);
  CHECK_THROWS_AS(fs_sign("stuck", key, rng, 200), params_infeasible);
}

TEST_CASE("keys and signatures survive a file round trip") {
  FsParams P = fs_toy_params();
  SeededRng key_rng(61);
  FsKeyPair key = fs_keygen(P, key_rng);
  SeededRng rng(67);
  FsSignature sig = fs_sign("persisted", key, rng).sig;

  write_fs_key("fs_key_full.txt", key, true);
  auto [full, has_secret] = read_fs_key("fs_key_full.txt");
  CHECK(has_secret);
  CHECK(full.A == key.A);
  CHECK(full.s1 == key.s1);
  CHECK(full.s2 == key.s2);
  CHECK(full.t == key.t);
  CHECK(full.params == key.params);

  write_fs_key("fs_key_pub.txt", key, false);
  auto [pub_only, pub_secret] = read_fs_key("fs_key_pub.txt");
  CHECK_FALSE(pub_secret);
  CHECK(pub_only.t == key.t);

  write_fs_sig("fs_sig.txt", sig);
  FsSignature loaded = read_fs_sig("fs_sig.txt");
  CHECK(loaded.z == sig.z);
  CHECK(loaded.c == sig.c);
  CHECK(fs_verify("persisted", loaded, pub_only.public_key()));

  write_text_file("fs_bad.txt", "fs-key v2", {"1"});
  CHECK_THROWS_AS(read_fs_key("fs_bad.txt"), std::runtime_error);

  for (const char* f : {"fs_key_full.txt", "fs_key_pub.txt", "fs_sig.txt", "fs_bad.txt"})
    std::remove(f);
}
