#pragma once

#include <stdexcept>
#include <string>

namespace ipfefr {

// Every failure mode in the library maps to one stable kebab-case name. The CLI
// prints `error: <name>: <detail>` on stderr and exits 1 for operational
// failures, so these names are part of the external interface.
enum class Errc {
  params_invalid,
  dimension_mismatch,
  modulus_mismatch,
  bound_exceeded,
  version_mismatch,
  revoked,
  no_solution,
  decode_failure,
  serialization,
  io,
  not_found,
  state,
  usage,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::params_invalid: return "params-invalid";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::modulus_mismatch: return "modulus-mismatch";
    case Errc::bound_exceeded: return "bound-exceeded";
    case Errc::version_mismatch: return "version-mismatch";
    case Errc::revoked: return "revoked";
    case Errc::no_solution: return "no-solution";
    case Errc::decode_failure: return "decode-failure";
    case Errc::serialization: return "serialization";
    case Errc::io: return "io";
    case Errc::not_found: return "not-found";
    case Errc::state: return "state";
    case Errc::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& detail)
      : std::runtime_error(std::string(errc_name(c)) + ": " + detail), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& detail) {
  throw Error(c, detail);
}

inline void require(bool ok, Errc c, const std::string& detail) {
  if (!ok) fail(c, detail);
}

}  // namespace ipfefr
