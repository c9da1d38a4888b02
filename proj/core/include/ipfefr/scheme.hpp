#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ipfefr/modmatrix.hpp"
#include "ipfefr/params.hpp"
#include "ipfefr/rng.hpp"
#include "ipfefr/trapdoor.hpp"

namespace ipfefr {

// Revocable inner-product functional encryption.
//
// Roles: a central authority holds the lattice trapdoor and a PRF key; a group
// manager registers institutions, runs epochs and revocation; record holders
// encrypt; institutions hold per-function keys and decrypt; an untrusted
// relay re-encrypts stored ciphertexts forward across epochs with a public
// update key.
//
// Decryption pipeline (all moduli from Params):
//   theta' = id^T pd2 - u_id^T pd1 (mod q)   -> theta  (step p^(k-1), range p)
//   mu'    = x^T c2  - (f + theta 1)^T c1 (mod p) -> mu (step floor(p/K), range K)
// and mu equals <x, y> whenever key/ciphertext versions match and the noise
// budgets hold.

struct MasterSecret {
  TrapdoorMatrix td;                 // trapdoor for A (mod p)
  std::array<uint8_t, 32> prf_key{}; // tags the directory layer per function
};

struct MasterPublic {
  Params prm;
  ModMatrix a;  // n x m mod p
  ModMatrix v;  // n x m mod q (directory layer)
  ModMatrix c;  // n x l1 mod p
};

struct SystemKeys {
  MasterSecret msk;
  MasterPublic mpk;
};

struct GroupPublic {
  ModMatrix f;      // n x l2 mod q  (= V D)
  ModMatrix u_ver;  // n x l1 mod p  (= A B_version)
  uint32_t version = 0;
};

// Group-manager private state. B matrices for every epoch are retained so the
// manager can issue refresh broadcasts for any step j-1 -> j.
struct GroupState {
  SignedMatrix d;                         // m x l2, width rho2
  std::vector<SignedMatrix> b_epochs;     // index = version
  std::vector<ModVector> revoked_ids;     // identity vectors, current epoch
  std::vector<std::string> revoked_names;
  std::vector<std::string> members;
  uint32_t version = 0;
};

struct GroupSetupResult {
  GroupState gs;
  GroupPublic gpk;
};

struct UserSecret {
  std::string name;
  ModVector id;      // l2 mod p, nonzero (identity hash)
  SignedVector u_id; // m over Z (= D id)
};

struct FunctionKey {
  SignedVector x;  // the function, entries in [0, X)
  SignedVector f;  // m over Z (= Z_ver x - v_{x,id} * 1)
  uint32_t version = 0;
};

struct Directory {
  ModVector pd1;  // m mod q
  ModVector pd2;  // l2 mod q
};

struct Ciphertext {
  ModVector c1;  // m mod p
  ModVector c2;  // l1 mod p
  uint32_t version = 0;
};

// Re-encryption key for one epoch step. Entries are residues mod p stored as
// 32-bit words (p < 2^32 always holds since q = p^k fits 64 bits with k >= 2);
// at the working dimensions this matrix is by far the largest object in the
// system, so the compact representation matters.
struct UpdateKey {
  uint32_t from_version = 0, to_version = 0;
  uint64_t p = 0;
  size_t rows = 0, cols = 0;  // (h m + l1) x (m + l1)
  std::vector<uint32_t> e;    // row-major
  uint32_t& at(size_t r, size_t c) { return e[r * cols + c]; }
  uint32_t at(size_t r, size_t c) const { return e[r * cols + c]; }
};

// Per-function refresh broadcast for one epoch step.
struct UpdateInfo {
  uint32_t to_version = 0;
  ModVector upi1;             // m mod q
  ModVector upi2;             // l2 mod q
  ModVector v_r;              // l2 mod p: direction orthogonal to revoked ids
  std::vector<uint8_t> upi3;  // masked packed key delta (pack_total_bits bits)
};

// ---- the eleven operations ----

SystemKeys system_setup(Rng& rng, const Params& prm);

GroupSetupResult group_setup(Rng& rng, const MasterPublic& mpk);

// Deterministic per identity (hash + D); registers the name in gs.members.
UserSecret ukeygen(const MasterPublic& mpk, GroupState& gs,
                   const std::string& identity);

// Issues the function key for institution `id` and function x at the group's
// current version. The preimage matrix for a version is cached inside msk's
// trapdoor-adjacent cache (see ZCache below) by the caller.
class ZCache {
 public:
  // Z_ver with A Z_ver = C + U_ver (mod p); computed on first use per version.
  const SignedMatrix& get(Rng& rng, const MasterSecret& msk,
                          const MasterPublic& mpk, const GroupPublic& gpk);
  void drop_before(uint32_t version);

 private:
  std::map<uint32_t, SignedMatrix> cache_;
};

FunctionKey fkeygen(Rng& rng, const MasterSecret& msk, const MasterPublic& mpk,
                    const GroupPublic& gpk, const UserSecret& usk,
                    const SignedVector& x, ZCache& zcache);

// Public directory entry for function x (independent of epoch).
Directory dir_publish(Rng& rng, const MasterSecret& msk, const MasterPublic& mpk,
                      const GroupPublic& gpk, const SignedVector& x);

Ciphertext enc(Rng& rng, const MasterPublic& mpk, const GroupPublic& gpk,
               const SignedVector& y);

// Errc::version_mismatch unless fk.version == ct.version.
uint64_t dec(const MasterPublic& mpk, const UserSecret& usk,
             const FunctionKey& fk, const Directory& dir, const Ciphertext& ct);

// Version-check bypass used by soundness experiments that model an attacker
// ignoring metadata; same math as dec.
uint64_t dec_unchecked(const MasterPublic& mpk, const UserSecret& usk,
                       const FunctionKey& fk, const Directory& dir,
                       const Ciphertext& ct);

// Advances the epoch: fresh B, version + 1, extends the revocation set.
// Errc::state if the operational update cap would be exceeded; Errc::not_found
// if a name was never registered.
GroupPublic group_update(Rng& rng, const MasterPublic& mpk, GroupState& gs,
                         const std::vector<std::string>& revoke);

// Re-encryption key for step (new_gpk.version - 1) -> new_gpk.version.
// z_old is the preimage matrix of the previous version (from ZCache).
UpdateKey uptkeygen(Rng& rng, const MasterSecret& msk, const MasterPublic& mpk,
                    const GroupPublic& new_gpk, const SignedMatrix& z_old);

Ciphertext ct_update(const MasterPublic& mpk, const UpdateKey& uptk,
                     const Ciphertext& ct);

// Per-function refresh broadcast for the group's current epoch step.
UpdateInfo fupdate(Rng& rng, const MasterPublic& mpk, const GroupState& gs,
                   const GroupPublic& gpk, const SignedVector& x);

// Applies one refresh step to a function key. Errc::version_mismatch unless
// upi.to_version == fk.version + 1; Errc::revoked when the holder's identity
// is orthogonal to the broadcast direction (cannot recover the epoch secret).
FunctionKey key_update(const MasterPublic& mpk, const UserSecret& usk,
                       const FunctionKey& fk, const UpdateInfo& upi);

}  // namespace ipfefr
