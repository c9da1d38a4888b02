#pragma once

// A fully pinned deployment used to freeze the canonical encodings: fixed
// profile, fixed seeds, fixed inputs. Any change to the wire format, the
// samplers, or the scheme algebra shows up as a golden-line mismatch.

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ipfefr/prims.hpp"
#include "ipfefr/scheme.hpp"
#include "ipfefr/wire.hpp"

namespace golden {

struct GoldenWorld {
  ipfefr::Params prm;
  ipfefr::SystemKeys keys;
  ipfefr::GroupSetupResult g;   // state already advanced to version 1
  ipfefr::GroupPublic gpk0;     // snapshot before the epoch step
  ipfefr::UserSecret alice;
  ipfefr::SignedVector x, y;
  ipfefr::FunctionKey fk;       // alice, version 0
  ipfefr::Directory dir;
  ipfefr::Ciphertext ct;        // version 0
  ipfefr::GroupPublic gpk1;     // after revoking bob
  ipfefr::UpdateKey uptk;
  ipfefr::UpdateInfo upi;
  ipfefr::Ciphertext ct1;       // ct carried forward
  ipfefr::FunctionKey fk1;      // alice refreshed
};

inline GoldenWorld make_golden_world() {
  using namespace ipfefr;
  GoldenWorld w;
  w.prm = profile("micro");
  {
    Rng r(uint64_t{101});
    w.keys = system_setup(r, w.prm);
  }
  {
    Rng r(uint64_t{102});
    w.g = group_setup(r, w.keys.mpk);
  }
  w.gpk0 = w.g.gpk;
  w.alice = ukeygen(w.keys.mpk, w.g.gs, "alice");
  UserSecret bob = ukeygen(w.keys.mpk, w.g.gs, "bob");
  w.x = SignedVector(2);
  w.x[0] = 1;
  w.x[1] = 1;
  w.y = w.x;
  ZCache zc;
  {
    Rng r(uint64_t{103});
    w.fk = fkeygen(r, w.keys.msk, w.keys.mpk, w.gpk0, w.alice, w.x, zc);
  }
  {
    Rng r(uint64_t{104});
    w.dir = dir_publish(r, w.keys.msk, w.keys.mpk, w.gpk0, w.x);
  }
  {
    Rng r(uint64_t{105});
    w.ct = enc(r, w.keys.mpk, w.gpk0, w.y);
  }
  {
    Rng r(uint64_t{106});
    w.gpk1 = group_update(r, w.keys.mpk, w.g.gs, {"bob"});
  }
  {
    // The version-0 preimage matrix is already cached; this draw is a lookup.
    Rng r(uint64_t{107});
    const SignedMatrix& z0 = zc.get(r, w.keys.msk, w.keys.mpk, w.gpk0);
    w.uptk = uptkeygen(r, w.keys.msk, w.keys.mpk, w.gpk1, z0);
  }
  {
    Rng r(uint64_t{108});
    w.upi = fupdate(r, w.keys.mpk, w.g.gs, w.gpk1, w.x);
  }
  w.ct1 = ct_update(w.keys.mpk, w.uptk, w.ct);
  w.fk1 = key_update(w.keys.mpk, w.alice, w.fk, w.upi);
  return w;
}

// Stable (name, hex) lines. Small objects are pinned byte-for-byte; the large
// ones (public matrices, trapdoor, manager state, re-encryption key) are
// pinned through a 32-byte domain-tagged digest, marked by a "#shake" suffix.
inline std::vector<std::pair<std::string, std::string>> golden_lines(
    const GoldenWorld& w) {
  using namespace ipfefr;
  std::vector<std::pair<std::string, std::string>> out;
  auto full = [&](const char* name, const std::vector<uint8_t>& bytes) {
    out.emplace_back(name, to_hex(bytes));
  };
  auto digest = [&](const char* name, const std::vector<uint8_t>& bytes) {
    out.emplace_back(std::string(name) + "#shake",
                     to_hex(shake256_digest("golden", bytes)));
  };
  full("params", encode_params(w.prm));
  digest("master-public", encode_master_public(w.keys.mpk));
  digest("master-secret", encode_master_secret(w.keys.msk, w.prm));
  full("group-public-v0", encode_group_public(w.gpk0, w.prm));
  full("group-public-v1", encode_group_public(w.gpk1, w.prm));
  digest("group-state", encode_group_state(w.g.gs, w.prm));
  full("user-secret", encode_user_secret(w.alice, w.prm));
  full("function-key-v0", encode_function_key(w.fk, w.prm));
  full("function-key-v1", encode_function_key(w.fk1, w.prm));
  full("directory", encode_directory(w.dir, w.prm));
  full("ciphertext-v0", encode_ciphertext(w.ct, w.prm));
  full("ciphertext-v1", encode_ciphertext(w.ct1, w.prm));
  digest("update-key", encode_update_key(w.uptk, w.prm));
  full("update-info", encode_update_info(w.upi, w.prm));
  return out;
}

inline std::map<std::string, std::string> load_golden_file(
    const std::string& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

inline void write_golden_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& lines) {
  std::ofstream out(path);
  out << "# Pinned canonical encodings of one fixed deployment.\n"
      << "# Regenerate with GOLDEN_REGEN=1 (unit tests, suite \"wire\").\n";
  for (const auto& [name, hex] : lines) out << name << '=' << hex << '\n';
}

}  // namespace golden
