#include <doctest.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ipfefr/errors.hpp"
#include "ipfefr/prims.hpp"

using namespace ipfefr;

namespace {
const std::vector<uint8_t> kMsg = {1, 2, 3, 4};
}

TEST_SUITE("prims") {

TEST_CASE("xof streams are deterministic and tag/message separated") {
  XofStream a("test/tag", kMsg);
  XofStream b("test/tag", kMsg);
  CHECK(a.read(257) == b.read(257));

  XofStream c("test/tag2", kMsg);
  XofStream d("test/tag", std::vector<uint8_t>{1, 2, 3, 5});
  XofStream e("test/tag", kMsg);
  std::vector<uint8_t> base = e.read(64);
  CHECK(c.read(64) != base);
  CHECK(d.read(64) != base);
}

TEST_CASE("xof output is a prefix-stable stream across block boundaries") {
  // Reading 100000 bytes at once must equal reading 65536 then 34464: the
  // 64 KiB internal block boundary is invisible to callers.
  XofStream one("prefix", kMsg);
  std::vector<uint8_t> whole = one.read(100000);

  XofStream two("prefix", kMsg);
  std::vector<uint8_t> first = two.read(65536);
  std::vector<uint8_t> second = two.read(34464);
  first.insert(first.end(), second.begin(), second.end());
  CHECK(whole == first);
}

TEST_CASE("xof residues are reduced and near uniform") {
  XofStream s("residues", kMsg);
  const uint64_t p = 5;
  std::array<int, 5> counts{};
  for (int i = 0; i < 10000; ++i) {
    uint64_t r = s.residue(p);
    REQUIRE(r < p);
    counts[r]++;
  }
  for (int c : counts) CHECK(std::abs(c - 2000) < 300);

  // Large modulus path (wide rejection chunks) still reduces.
  XofStream t("residues", kMsg);
  for (int i = 0; i < 100; ++i) CHECK(t.residue(577327957ull) < 577327957ull);
}

TEST_CASE("one-shot digest distinguishes tags and messages") {
  auto d1 = shake256_digest("dig", kMsg);
  auto d2 = shake256_digest("dig", kMsg);
  auto d3 = shake256_digest("dig2", kMsg);
  auto d4 = shake256_digest("dig", std::vector<uint8_t>{9});
  CHECK(d1 == d2);
  CHECK(d1 != d3);
  CHECK(d1 != d4);
  // Tag/length framing: ("ab", "c"...) must differ from ("a", "bc"...).
  auto e1 = shake256_digest("ab", std::vector<uint8_t>{'c'});
  auto e2 = shake256_digest("a", std::vector<uint8_t>{'b', 'c'});
  CHECK(e1 != e2);
}

TEST_CASE("identity hashing is deterministic, reduced, and never zero") {
  const uint64_t p = 1000003;
  ModVector alice = hash_identity("alice", p, 9);
  CHECK(alice.size() == 9);
  CHECK(alice.mod == p);
  CHECK(hash_identity("alice", p, 9) == alice);
  CHECK(hash_identity("bob", p, 9) != alice);
  bool nonzero = false;
  for (size_t i = 0; i < alice.size(); ++i) {
    REQUIRE(alice[i] < p);
    nonzero = nonzero || alice[i] != 0;
  }
  CHECK(nonzero);

  // Tiny modulus and length force many all-zero draws to be skipped; the
  // result must still be nonzero every time.
  for (int t = 0; t < 200; ++t) {
    ModVector id = hash_identity("user-" + std::to_string(t), 2, 1);
    CHECK(id[0] == 1);
  }
}

TEST_CASE("epoch masks have the exact bit count and track the secret") {
  const uint64_t p = 1000003;
  std::vector<uint8_t> m = hash_mask(12345, p, 19);
  CHECK(m.size() == 3);
  CHECK((m[2] & 0xF8) == 0);  // bits 19..23 zero-padded
  CHECK(hash_mask(12345, p, 19) == m);
  CHECK(hash_mask(12346, p, 19) != m);

  std::vector<uint8_t> whole = hash_mask(7, p, 16);
  CHECK(whole.size() == 2);

  // Non-degenerate: over many secrets the masks are not all identical.
  int distinct = 0;
  std::vector<uint8_t> prev;
  for (uint64_t s = 0; s < 32; ++s) {
    std::vector<uint8_t> cur = hash_mask(s, p, 64);
    if (cur != prev) distinct++;
    prev = cur;
  }
  CHECK(distinct == 32);
}

TEST_CASE("function tags are keyed, reduced, and sign-sensitive") {
  std::array<uint8_t, 32> key{};
  key[0] = 0xAA;
  std::array<uint8_t, 32> key2 = key;
  key2[31] = 1;

  SignedVector x(3);
  x[0] = 4;
  x[1] = -4;
  x[2] = 0;
  const uint64_t p = 1000003;

  ModVector t = prf_tags(key, x, p, 9);
  CHECK(t.size() == 9);
  CHECK(t.mod == p);
  for (size_t i = 0; i < t.size(); ++i) REQUIRE(t[i] < p);
  CHECK(prf_tags(key, x, p, 9) == t);
  CHECK(prf_tags(key2, x, p, 9) != t);

  SignedVector x2 = x;
  x2[1] = 4;  // sign flip must change the input serialization
  CHECK(prf_tags(key, x2, p, 9) != t);

  SignedVector x3 = x;
  x3[2] = 1;
  CHECK(prf_tags(key, x3, p, 9) != t);
}

TEST_CASE("hex helpers round-trip and reject malformed input") {
  std::vector<uint8_t> bytes = {0x00, 0xAB, 0xFF, 0x10};
  std::string hex = to_hex(bytes);
  CHECK(hex == "00abff10");
  CHECK(from_hex(hex) == bytes);

  std::array<uint8_t, 32> arr{};
  arr[0] = 0x5e;
  CHECK(to_hex(arr).size() == 64);
  CHECK(to_hex(arr).substr(0, 2) == "5e");

  CHECK(from_hex("").empty());
  CHECK_THROWS_AS(from_hex("abc"), Error);   // odd length
  CHECK_THROWS_AS(from_hex("zz"), Error);    // non-hex digit
}

}  // TEST_SUITE
