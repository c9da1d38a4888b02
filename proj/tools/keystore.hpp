#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ipfefr/modmatrix.hpp"

namespace ipfefr::tool {

// On-disk object store shared by every role command. Layout under one root:
//
//   manifest.json       profile name + parameter-set fingerprint
//   mpk.bin  msk.bin    master keys (msk only on the authority's store)
//   gstate.bin          group-manager private state
//   gpk.bin             current group public key
//   gpk_v<N>.bin        group public key of epoch N (kept for update keys)
//   usk_<id>.bin        institution secret key
//   fk_<id>_<xtag>.bin  function key (xtag = 8-hex fingerprint of x)
//   pd_<xtag>.bin       public directory entry for x
//   ct_<label>.bin      stored ciphertext
//   uptk_v<N>.bin       re-encryption key for the step N-1 -> N
//   upi_v<N>_<xtag>.bin refresh broadcast targeting epoch N
//
// Mutating commands hold an exclusive flock on <root>/.lock for their whole
// run; readers take the same lock, so a store is never observed mid-write.
class Keystore {
 public:
  explicit Keystore(std::string root);
  ~Keystore();
  Keystore(const Keystore&) = delete;
  Keystore& operator=(const Keystore&) = delete;

  // Creates the root directory if needed and takes the exclusive lock.
  void open_and_lock(bool create);

  const std::string& root() const { return root_; }
  std::string path(const std::string& file) const;
  bool has(const std::string& file) const;
  std::vector<uint8_t> load(const std::string& file) const;  // Errc::not_found
  void save(const std::string& file, const std::vector<uint8_t>& bytes) const;

  bool has_manifest() const;
  nlohmann::json manifest() const;
  void write_manifest(const nlohmann::json& j) const;

 private:
  std::string root_;
  int lock_fd_ = -1;
};

// Validates an identity/label for embedding in a file name:
// [A-Za-z0-9][A-Za-z0-9._-]{0,63}. Errc::usage otherwise.
const std::string& check_name(const std::string& s, const char* what);

// 8-hex-character fingerprint of a function vector, used in file names.
std::string xtag(const SignedVector& x);

}  // namespace ipfefr::tool
