#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "golden_objects.hpp"
#include "ipfefr/wire.hpp"
#include "test_util.hpp"

using namespace ipfefr;

namespace {

const golden::GoldenWorld& world() {
  static golden::GoldenWorld w = golden::make_golden_world();
  return w;
}

bool is_rejected(const std::vector<uint8_t>& bytes,
                 const Params& prm) {
  return error_code_of([&] { decode_group_public(bytes, prm); }) ==
         Errc::serialization;
}

}  // namespace

TEST_SUITE("wire") {

TEST_CASE("every object kind round-trips through the canonical encoding") {
  const auto& w = world();
  const Params& prm = w.prm;

  CHECK(decode_params(encode_params(prm)) == prm);

  MasterPublic mpk = decode_master_public(encode_master_public(w.keys.mpk));
  CHECK(mpk.prm == prm);
  CHECK(mpk.a == w.keys.mpk.a);
  CHECK(mpk.v == w.keys.mpk.v);
  CHECK(mpk.c == w.keys.mpk.c);

  MasterSecret msk =
      decode_master_secret(encode_master_secret(w.keys.msk, prm), prm);
  CHECK(msk.prf_key == w.keys.msk.prf_key);
  CHECK(msk.td.p == w.keys.msk.td.p);
  CHECK(msk.td.n == w.keys.msk.td.n);
  CHECK(msk.td.m == w.keys.msk.td.m);
  CHECK(msk.td.h == w.keys.msk.td.h);
  CHECK(msk.td.s1_measured == w.keys.msk.td.s1_measured);
  CHECK(msk.td.quality == w.keys.msk.td.quality);
  CHECK(msk.td.a == w.keys.msk.td.a);
  CHECK(msk.td.r == w.keys.msk.td.r);
  REQUIRE(msk.td.basis != nullptr);  // rebuilt, ready to sample again

  GroupPublic gpk = decode_group_public(encode_group_public(w.gpk1, prm), prm);
  CHECK(gpk.f == w.gpk1.f);
  CHECK(gpk.u_ver == w.gpk1.u_ver);
  CHECK(gpk.version == w.gpk1.version);

  GroupState gs = decode_group_state(encode_group_state(w.g.gs, prm), prm);
  CHECK(gs.d == w.g.gs.d);
  CHECK(gs.b_epochs == w.g.gs.b_epochs);
  CHECK(gs.revoked_ids == w.g.gs.revoked_ids);
  CHECK(gs.revoked_names == w.g.gs.revoked_names);
  CHECK(gs.members == w.g.gs.members);
  CHECK(gs.version == w.g.gs.version);

  UserSecret usk = decode_user_secret(encode_user_secret(w.alice, prm), prm);
  CHECK(usk.name == w.alice.name);
  CHECK(usk.id == w.alice.id);
  CHECK(usk.u_id == w.alice.u_id);

  FunctionKey fk = decode_function_key(encode_function_key(w.fk, prm), prm);
  CHECK(fk.x == w.fk.x);
  CHECK(fk.f == w.fk.f);
  CHECK(fk.version == w.fk.version);

  Ciphertext ct = decode_ciphertext(encode_ciphertext(w.ct, prm), prm);
  CHECK(ct.c1 == w.ct.c1);
  CHECK(ct.c2 == w.ct.c2);
  CHECK(ct.version == w.ct.version);

  Directory dir = decode_directory(encode_directory(w.dir, prm), prm);
  CHECK(dir.pd1 == w.dir.pd1);
  CHECK(dir.pd2 == w.dir.pd2);

  UpdateKey uk = decode_update_key(encode_update_key(w.uptk, prm), prm);
  CHECK(uk.from_version == w.uptk.from_version);
  CHECK(uk.to_version == w.uptk.to_version);
  CHECK(uk.p == w.uptk.p);
  CHECK(uk.rows == w.uptk.rows);
  CHECK(uk.cols == w.uptk.cols);
  CHECK(uk.e == w.uptk.e);

  UpdateInfo upi = decode_update_info(encode_update_info(w.upi, prm), prm);
  CHECK(upi.to_version == w.upi.to_version);
  CHECK(upi.upi1 == w.upi.upi1);
  CHECK(upi.upi2 == w.upi.upi2);
  CHECK(upi.v_r == w.upi.v_r);
  CHECK(upi.upi3 == w.upi.upi3);
}

TEST_CASE("decoded objects still work: the pipeline survives a disk trip") {
  const auto& w = world();
  const Params& prm = w.prm;
  MasterPublic mpk = decode_master_public(encode_master_public(w.keys.mpk));
  UserSecret usk = decode_user_secret(encode_user_secret(w.alice, prm), prm);
  FunctionKey fk1 =
      decode_function_key(encode_function_key(w.fk1, prm), prm);
  Directory dir = decode_directory(encode_directory(w.dir, prm), prm);
  Ciphertext ct1 = decode_ciphertext(encode_ciphertext(w.ct1, prm), prm);
  CHECK(dec(mpk, usk, fk1, dir, ct1) == 2);  // <x, y> = <(1,1), (1,1)>
}

TEST_CASE("encoding is deterministic and re-encoding reproduces the bytes") {
  const auto& w = world();
  const Params& prm = w.prm;
  std::vector<uint8_t> once = encode_ciphertext(w.ct, prm);
  CHECK(encode_ciphertext(w.ct, prm) == once);
  CHECK(encode_ciphertext(decode_ciphertext(once, prm), prm) == once);

  std::vector<uint8_t> gs_bytes = encode_group_state(w.g.gs, prm);
  CHECK(encode_group_state(decode_group_state(gs_bytes, prm), prm) == gs_bytes);
  std::vector<uint8_t> upi_bytes = encode_update_info(w.upi, prm);
  CHECK(encode_update_info(decode_update_info(upi_bytes, prm), prm) ==
        upi_bytes);
}

TEST_CASE("kind bytes and names are exposed for dispatch") {
  const auto& w = world();
  CHECK(peek_kind(encode_params(w.prm)) == WireKind::params);
  CHECK(peek_kind(encode_ciphertext(w.ct, w.prm)) == WireKind::ciphertext);
  CHECK(std::string(wire_kind_name(WireKind::ciphertext)) == "ciphertext");
  CHECK(std::string(wire_kind_name(WireKind::update_key)) == "update-key");
}

TEST_CASE("corrupted frames are rejected") {
  const auto& w = world();
  const Params& prm = w.prm;
  const std::vector<uint8_t> good = encode_group_public(w.gpk1, prm);

  SUBCASE("bad magic") {
    std::vector<uint8_t> bytes = good;
    bytes[0] ^= 0x01;
    CHECK(is_rejected(bytes, prm));
  }
  SUBCASE("wrong kind") {
    // A valid params frame handed to the group-public decoder.
    CHECK(is_rejected(encode_params(prm), prm));
  }
  SUBCASE("truncated") {
    std::vector<uint8_t> bytes = good;
    bytes.pop_back();
    CHECK(is_rejected(bytes, prm));
    bytes.resize(20);  // shorter than any header
    CHECK(is_rejected(bytes, prm));
  }
  SUBCASE("trailing garbage") {
    std::vector<uint8_t> bytes = good;
    bytes.push_back(0x00);
    CHECK(is_rejected(bytes, prm));
  }
  SUBCASE("bound to different parameters") {
    // Same body, but the header digest says another parameter set.
    CHECK(error_code_of([&] { decode_group_public(good, profile("toy")); }) ==
          Errc::serialization);
  }
  SUBCASE("out-of-range residue") {
    // Header is 41 bytes; c1 starts with u64 modulus + u32 length, so the
    // first 4-byte residue sits at offsets 53..56. Forcing its top byte to
    // 0xFF pushes it past the modulus.
    std::vector<uint8_t> bytes = encode_ciphertext(w.ct, prm);
    bytes[56] = 0xFF;
    CHECK(error_code_of([&] { decode_ciphertext(bytes, prm); }) ==
          Errc::serialization);
  }
  SUBCASE("version out of sync with state") {
    GroupState gs = w.g.gs;
    gs.version += 1;  // claims one more epoch than it has matrices for
    std::vector<uint8_t> bytes = encode_group_state(gs, prm);
    CHECK(error_code_of([&] { decode_group_state(bytes, prm); }) ==
          Errc::serialization);
  }
}

TEST_CASE("whole files are written atomically and read back verbatim") {
  const auto& w = world();
  std::vector<uint8_t> bytes = encode_ciphertext(w.ct, w.prm);
  std::string path =
      std::string(IPFEFR_GOLDEN_DIR) + "/../tmp_wire_roundtrip.bin";
  write_file(path, bytes);
  CHECK(read_file(path) == bytes);
  std::remove(path.c_str());
  CHECK(error_code_of([&] { read_file(path); }) == Errc::io);
}

TEST_CASE("pinned encodings of a fixed deployment are stable") {
  const auto& w = world();
  auto lines = golden::golden_lines(w);
  const std::string path = std::string(IPFEFR_GOLDEN_DIR) + "/golden_micro.txt";

  if (std::getenv("GOLDEN_REGEN") != nullptr) {
    golden::write_golden_file(path, lines);
    MESSAGE("regenerated ", path);
    return;
  }

  auto pinned = golden::load_golden_file(path);
  REQUIRE_MESSAGE(!pinned.empty(),
                  "missing golden file; run once with GOLDEN_REGEN=1");
  CHECK(pinned.size() == lines.size());
  for (const auto& [name, hex] : lines) {
    auto it = pinned.find(name);
    REQUIRE_MESSAGE(it != pinned.end(), "no pinned line for ", name);
    CHECK_MESSAGE(it->second == hex, "drift in ", name);
  }
}

}  // TEST_SUITE
