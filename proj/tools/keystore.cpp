#include "keystore.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cctype>
#include <filesystem>
#include <fstream>

#include "ipfefr/errors.hpp"
#include "ipfefr/prims.hpp"
#include "ipfefr/wire.hpp"

namespace ipfefr::tool {

namespace fs = std::filesystem;

Keystore::Keystore(std::string root) : root_(std::move(root)) {}

Keystore::~Keystore() {
  if (lock_fd_ >= 0) ::close(lock_fd_);  // releases the flock
}

void Keystore::open_and_lock(bool create) {
  std::error_code ec;
  if (create) {
    fs::create_directories(root_, ec);
    require(!ec, Errc::io, "cannot create store: " + root_ + ": " + ec.message());
  }
  require(fs::is_directory(root_, ec), Errc::not_found,
          "store does not exist: " + root_);
  std::string lock_path = path(".lock");
  lock_fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0600);
  require(lock_fd_ >= 0, Errc::io, "cannot open lock file: " + lock_path);
  require(::flock(lock_fd_, LOCK_EX) == 0, Errc::io,
          "cannot lock store: " + root_);
}

std::string Keystore::path(const std::string& file) const {
  return (fs::path(root_) / file).string();
}

bool Keystore::has(const std::string& file) const {
  std::error_code ec;
  return fs::is_regular_file(path(file), ec);
}

std::vector<uint8_t> Keystore::load(const std::string& file) const {
  require(has(file), Errc::not_found, "missing object in store: " + file);
  return read_file(path(file));
}

void Keystore::save(const std::string& file, const std::vector<uint8_t>& bytes) const {
  write_file(path(file), bytes);
}

bool Keystore::has_manifest() const { return has("manifest.json"); }

nlohmann::json Keystore::manifest() const {
  require(has_manifest(), Errc::not_found,
          "store is not initialized (no manifest.json): " + root_);
  std::ifstream in(path("manifest.json"));
  require(in.good(), Errc::io, "cannot read manifest");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::serialization, std::string("manifest is not valid JSON: ") + e.what());
  }
  return j;
}

void Keystore::write_manifest(const nlohmann::json& j) const {
  std::string text = j.dump(2);
  text.push_back('\n');
  std::vector<uint8_t> bytes(text.begin(), text.end());
  save("manifest.json", bytes);
}

const std::string& check_name(const std::string& s, const char* what) {
  bool ok = !s.empty() && s.size() <= 64 && std::isalnum(static_cast<unsigned char>(s[0]));
  for (size_t i = 1; ok && i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    ok = std::isalnum(c) || c == '.' || c == '_' || c == '-';
  }
  require(ok, Errc::usage,
          std::string(what) +
              " must match [A-Za-z0-9][A-Za-z0-9._-]{0,63}: got \"" + s + "\"");
  return s;
}

std::string xtag(const SignedVector& x) {
  std::vector<uint8_t> msg;
  msg.reserve(8 * x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    uint64_t zz = (static_cast<uint64_t>(x[i]) << 1) ^
                  static_cast<uint64_t>(x[i] >> 63);
    for (int b = 0; b < 8; ++b) msg.push_back(static_cast<uint8_t>(zz >> (8 * b)));
  }
  auto digest = shake256_digest("IPFEFR/XNAME", msg);
  static const char* hexd = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 4; ++i) {
    out.push_back(hexd[digest[i] >> 4]);
    out.push_back(hexd[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace ipfefr::tool
