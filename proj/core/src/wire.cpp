#include "ipfefr/wire.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "ipfefr/errors.hpp"
#include "ipfefr/modarith.hpp"
#include "ipfefr/prims.hpp"

namespace ipfefr {

namespace {

constexpr uint8_t kMagic[8] = {'I', 'P', 'F', 'E', 'F', 'R', 0x00, 0x01};
constexpr size_t kHeaderLen = 8 + 1 + 32;

size_t residue_width(uint64_t mod) {
  return (bits_for_modulus(mod) + 7) / 8;
}

class Writer {
 public:
  std::vector<uint8_t> out;

  void u8(uint8_t v) { out.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void i64(int64_t v) {
    uint64_t zz = (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
    u64(zz);
  }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void str(const std::string& s) {
    require(s.size() <= UINT32_MAX, Errc::serialization, "string too long");
    u32(static_cast<uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
  }
  void blob(const std::vector<uint8_t>& b) {
    require(b.size() <= UINT32_MAX, Errc::serialization, "blob too long");
    u32(static_cast<uint32_t>(b.size()));
    out.insert(out.end(), b.begin(), b.end());
  }
  void residue(uint64_t v, size_t width) {
    for (size_t i = 0; i < width; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void modvec(const ModVector& x) {
    require(x.mod >= 2, Errc::serialization, "vector has no modulus");
    u64(x.mod);
    require(x.size() <= UINT32_MAX, Errc::serialization, "vector too long");
    u32(static_cast<uint32_t>(x.size()));
    size_t w = residue_width(x.mod);
    for (size_t i = 0; i < x.size(); ++i) residue(x[i], w);
  }
  void modmat(const ModMatrix& m) {
    require(m.mod >= 2, Errc::serialization, "matrix has no modulus");
    u64(m.mod);
    require(m.rows <= UINT32_MAX && m.cols <= UINT32_MAX, Errc::serialization,
            "matrix too large");
    u32(static_cast<uint32_t>(m.rows));
    u32(static_cast<uint32_t>(m.cols));
    size_t w = residue_width(m.mod);
    for (uint64_t v : m.a) residue(v, w);
  }
  void svec(const SignedVector& x) {
    require(x.size() <= UINT32_MAX, Errc::serialization, "vector too long");
    u32(static_cast<uint32_t>(x.size()));
    for (size_t i = 0; i < x.size(); ++i) i64(x[i]);
  }
  void smat(const SignedMatrix& m) {
    require(m.rows <= UINT32_MAX && m.cols <= UINT32_MAX, Errc::serialization,
            "matrix too large");
    u32(static_cast<uint32_t>(m.rows));
    u32(static_cast<uint32_t>(m.cols));
    for (int64_t v : m.a) i64(v);
  }
};

class Reader {
 public:
  Reader(const uint8_t* data, size_t len) : p_(data), end_(data + len) {}

  uint8_t u8() { return take(1)[0]; }
  uint32_t u32() {
    const uint8_t* b = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    const uint8_t* b = take(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }
  int64_t i64() {
    uint64_t zz = u64();
    return static_cast<int64_t>((zz >> 1) ^ (~(zz & 1) + 1));
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    uint32_t len = u32();
    const uint8_t* b = take(len);
    return std::string(reinterpret_cast<const char*>(b), len);
  }
  std::vector<uint8_t> blob() {
    uint32_t len = u32();
    const uint8_t* b = take(len);
    return std::vector<uint8_t>(b, b + len);
  }
  std::vector<uint8_t> blob_fixed(size_t n) {
    const uint8_t* b = take(n);
    return std::vector<uint8_t>(b, b + n);
  }
  uint64_t residue(size_t width, uint64_t mod) {
    const uint8_t* b = take(width);
    uint64_t v = 0;
    for (size_t i = 0; i < width; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    require(v < mod, Errc::serialization, "residue out of range");
    return v;
  }
  ModVector modvec() {
    uint64_t mod = u64();
    require(mod >= 2, Errc::serialization, "bad modulus");
    uint32_t len = u32();
    size_t w = residue_width(mod);
    check_space(static_cast<size_t>(len) * w);
    ModVector x(mod, len);
    for (uint32_t i = 0; i < len; ++i) x[i] = residue(w, mod);
    return x;
  }
  ModMatrix modmat() {
    uint64_t mod = u64();
    require(mod >= 2, Errc::serialization, "bad modulus");
    uint32_t rows = u32(), cols = u32();
    size_t w = residue_width(mod);
    size_t count = static_cast<size_t>(rows) * cols;
    check_space(count * w);
    ModMatrix m(mod, rows, cols);
    for (size_t i = 0; i < count; ++i) m.a[i] = residue(w, mod);
    return m;
  }
  SignedVector svec() {
    uint32_t len = u32();
    check_space(static_cast<size_t>(len) * 8);
    SignedVector x(len);
    for (uint32_t i = 0; i < len; ++i) x[i] = i64();
    return x;
  }
  SignedMatrix smat() {
    uint32_t rows = u32(), cols = u32();
    size_t count = static_cast<size_t>(rows) * cols;
    check_space(count * 8);
    SignedMatrix m(rows, cols);
    for (size_t i = 0; i < count; ++i) m.a[i] = i64();
    return m;
  }
  void finish() {
    require(p_ == end_, Errc::serialization, "trailing bytes after object");
  }

 private:
  const uint8_t* take(size_t n) {
    check_space(n);
    const uint8_t* b = p_;
    p_ += n;
    return b;
  }
  void check_space(size_t n) {
    require(static_cast<size_t>(end_ - p_) >= n, Errc::serialization,
            "object truncated");
  }
  const uint8_t* p_;
  const uint8_t* end_;
};

void write_params_body(Writer& w, const Params& prm) {
  w.u32(prm.n);
  w.u32(prm.m);
  w.u32(prm.l1);
  w.u32(prm.l2);
  w.u32(prm.n_inst);
  w.u64(prm.p);
  w.u32(prm.k);
  w.u64(prm.q);
  w.u32(prm.h);
  w.u64(prm.x_bound);
  w.u64(prm.y_bound);
  w.u64(prm.k_range);
  w.f64(prm.rho_td);
  w.f64(prm.rho1);
  w.f64(prm.rho2);
  w.f64(prm.sigma1);
  w.f64(prm.sigma2);
  w.f64(prm.alpha);
  w.f64(prm.alpha1);
  w.u32(prm.v_max);
  w.u32(prm.v_guaranteed);
  w.u64(prm.pack_bound);
  w.u32(prm.pack_width_bits);
  w.u64(prm.pack_total_bits);
  w.f64(prm.margin);
}

Params read_params_body(Reader& r) {
  Params prm;
  prm.n = r.u32();
  prm.m = r.u32();
  prm.l1 = r.u32();
  prm.l2 = r.u32();
  prm.n_inst = r.u32();
  prm.p = r.u64();
  prm.k = r.u32();
  prm.q = r.u64();
  prm.h = r.u32();
  prm.x_bound = r.u64();
  prm.y_bound = r.u64();
  prm.k_range = r.u64();
  prm.rho_td = r.f64();
  prm.rho1 = r.f64();
  prm.rho2 = r.f64();
  prm.sigma1 = r.f64();
  prm.sigma2 = r.f64();
  prm.alpha = r.f64();
  prm.alpha1 = r.f64();
  prm.v_max = r.u32();
  prm.v_guaranteed = r.u32();
  prm.pack_bound = r.u64();
  prm.pack_width_bits = r.u32();
  prm.pack_total_bits = r.u64();
  prm.margin = r.f64();
  return prm;
}

void write_header(Writer& w, WireKind kind, const std::array<uint8_t, 32>& digest) {
  w.out.insert(w.out.end(), kMagic, kMagic + 8);
  w.u8(static_cast<uint8_t>(kind));
  w.out.insert(w.out.end(), digest.begin(), digest.end());
}

// Validates the frame and returns a reader positioned at the body.
Reader open_frame(const std::vector<uint8_t>& bytes, WireKind kind,
                  const std::array<uint8_t, 32>& expect_digest) {
  require(bytes.size() >= kHeaderLen, Errc::serialization, "object truncated");
  require(std::memcmp(bytes.data(), kMagic, 8) == 0, Errc::serialization,
          "bad magic");
  require(bytes[8] == static_cast<uint8_t>(kind), Errc::serialization,
          std::string("wrong object kind (expected ") + wire_kind_name(kind) + ")");
  require(std::memcmp(bytes.data() + 9, expect_digest.data(), 32) == 0,
          Errc::serialization, "object bound to a different parameter set");
  return Reader(bytes.data() + kHeaderLen, bytes.size() - kHeaderLen);
}

void expect_modvec(const ModVector& v, uint64_t mod, size_t len, const char* what) {
  require(v.mod == mod, Errc::serialization, std::string(what) + ": wrong modulus");
  require(v.size() == len, Errc::serialization, std::string(what) + ": wrong length");
}

void expect_modmat(const ModMatrix& m, uint64_t mod, size_t rows, size_t cols,
                   const char* what) {
  require(m.mod == mod, Errc::serialization, std::string(what) + ": wrong modulus");
  require(m.rows == rows && m.cols == cols, Errc::serialization,
          std::string(what) + ": wrong shape");
}

}  // namespace

const char* wire_kind_name(WireKind k) {
  switch (k) {
    case WireKind::params: return "params";
    case WireKind::master_public: return "master-public";
    case WireKind::master_secret: return "master-secret";
    case WireKind::group_public: return "group-public";
    case WireKind::group_state: return "group-state";
    case WireKind::user_secret: return "user-secret";
    case WireKind::function_key: return "function-key";
    case WireKind::ciphertext: return "ciphertext";
    case WireKind::directory: return "directory";
    case WireKind::update_key: return "update-key";
    case WireKind::update_info: return "update-info";
  }
  return "unknown";
}

std::array<uint8_t, 32> params_digest(const Params& prm) {
  Writer w;
  write_params_body(w, prm);
  return shake256_digest("IPFEFR/PARAMS", w.out);
}

WireKind peek_kind(const std::vector<uint8_t>& bytes) {
  require(bytes.size() >= kHeaderLen, Errc::serialization, "object truncated");
  require(std::memcmp(bytes.data(), kMagic, 8) == 0, Errc::serialization,
          "bad magic");
  uint8_t k = bytes[8];
  require(k >= 0x01 && k <= 0x0B, Errc::serialization, "unknown object kind");
  return static_cast<WireKind>(k);
}

std::vector<uint8_t> encode_params(const Params& prm) {
  Writer w;
  write_header(w, WireKind::params, std::array<uint8_t, 32>{});
  write_params_body(w, prm);
  return std::move(w.out);
}

Params decode_params(const std::vector<uint8_t>& bytes) {
  Reader r = open_frame(bytes, WireKind::params, std::array<uint8_t, 32>{});
  Params prm = read_params_body(r);
  r.finish();
  return prm;
}

std::vector<uint8_t> encode_master_public(const MasterPublic& mpk) {
  Writer w;
  write_header(w, WireKind::master_public, params_digest(mpk.prm));
  write_params_body(w, mpk.prm);
  w.modmat(mpk.a);
  w.modmat(mpk.v);
  w.modmat(mpk.c);
  return std::move(w.out);
}

MasterPublic decode_master_public(const std::vector<uint8_t>& bytes) {
  require(bytes.size() >= kHeaderLen, Errc::serialization, "object truncated");
  require(std::memcmp(bytes.data(), kMagic, 8) == 0, Errc::serialization,
          "bad magic");
  require(bytes[8] == static_cast<uint8_t>(WireKind::master_public),
          Errc::serialization, "wrong object kind (expected master-public)");
  Reader r(bytes.data() + kHeaderLen, bytes.size() - kHeaderLen);
  MasterPublic mpk;
  mpk.prm = read_params_body(r);
  std::array<uint8_t, 32> digest = params_digest(mpk.prm);
  require(std::memcmp(bytes.data() + 9, digest.data(), 32) == 0,
          Errc::serialization, "header digest does not match embedded params");
  mpk.a = r.modmat();
  mpk.v = r.modmat();
  mpk.c = r.modmat();
  r.finish();
  const Params& prm = mpk.prm;
  expect_modmat(mpk.a, prm.p, prm.n, prm.m, "public matrix");
  expect_modmat(mpk.v, prm.q, prm.n, prm.m, "directory matrix");
  expect_modmat(mpk.c, prm.p, prm.n, prm.l1, "function matrix");
  return mpk;
}

std::vector<uint8_t> encode_master_secret(const MasterSecret& msk, const Params& prm) {
  Writer w;
  write_header(w, WireKind::master_secret, params_digest(prm));
  w.out.insert(w.out.end(), msk.prf_key.begin(), msk.prf_key.end());
  const TrapdoorMatrix& td = msk.td;
  w.u64(td.p);
  w.u32(td.n);
  w.u32(td.m);
  w.u32(td.h);
  w.f64(td.s1_measured);
  w.f64(td.quality);
  w.modmat(td.a);
  w.smat(td.r);
  return std::move(w.out);
}

MasterSecret decode_master_secret(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::master_secret, params_digest(prm));
  MasterSecret msk;
  std::vector<uint8_t> key = r.blob_fixed(32);
  std::copy(key.begin(), key.end(), msk.prf_key.begin());
  TrapdoorMatrix& td = msk.td;
  td.p = r.u64();
  td.n = r.u32();
  td.m = r.u32();
  td.h = r.u32();
  td.s1_measured = r.f64();
  td.quality = r.f64();
  td.a = r.modmat();
  td.r = r.smat();
  r.finish();
  require(td.p == prm.p && td.n == prm.n && td.m == prm.m && td.h == prm.h,
          Errc::serialization, "trapdoor bound to different dimensions");
  expect_modmat(td.a, prm.p, prm.n, prm.m, "trapdoor public matrix");
  require(td.r.rows == prm.m - static_cast<size_t>(prm.n) * prm.h &&
              td.r.cols == static_cast<size_t>(prm.n) * prm.h,
          Errc::serialization, "trapdoor secret shape");
  td.basis = std::make_shared<GadgetBasis>(td.p);
  td.perturb = std::make_shared<PerturbCache>();
  return msk;
}

std::vector<uint8_t> encode_group_public(const GroupPublic& gpk, const Params& prm) {
  Writer w;
  write_header(w, WireKind::group_public, params_digest(prm));
  w.modmat(gpk.f);
  w.modmat(gpk.u_ver);
  w.u32(gpk.version);
  return std::move(w.out);
}

GroupPublic decode_group_public(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::group_public, params_digest(prm));
  GroupPublic gpk;
  gpk.f = r.modmat();
  gpk.u_ver = r.modmat();
  gpk.version = r.u32();
  r.finish();
  expect_modmat(gpk.f, prm.q, prm.n, prm.l2, "group directory matrix");
  expect_modmat(gpk.u_ver, prm.p, prm.n, prm.l1, "group epoch matrix");
  return gpk;
}

std::vector<uint8_t> encode_group_state(const GroupState& gs, const Params& prm) {
  Writer w;
  write_header(w, WireKind::group_state, params_digest(prm));
  w.smat(gs.d);
  w.u32(static_cast<uint32_t>(gs.b_epochs.size()));
  for (const auto& b : gs.b_epochs) w.smat(b);
  w.u32(static_cast<uint32_t>(gs.revoked_ids.size()));
  for (const auto& id : gs.revoked_ids) w.modvec(id);
  w.u32(static_cast<uint32_t>(gs.revoked_names.size()));
  for (const auto& s : gs.revoked_names) w.str(s);
  w.u32(static_cast<uint32_t>(gs.members.size()));
  for (const auto& s : gs.members) w.str(s);
  w.u32(gs.version);
  return std::move(w.out);
}

GroupState decode_group_state(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::group_state, params_digest(prm));
  GroupState gs;
  gs.d = r.smat();
  uint32_t nb = r.u32();
  for (uint32_t i = 0; i < nb; ++i) gs.b_epochs.push_back(r.smat());
  uint32_t nr = r.u32();
  for (uint32_t i = 0; i < nr; ++i) gs.revoked_ids.push_back(r.modvec());
  uint32_t nn = r.u32();
  for (uint32_t i = 0; i < nn; ++i) gs.revoked_names.push_back(r.str());
  uint32_t nm = r.u32();
  for (uint32_t i = 0; i < nm; ++i) gs.members.push_back(r.str());
  gs.version = r.u32();
  r.finish();
  require(gs.d.rows == prm.m && gs.d.cols == prm.l2, Errc::serialization,
          "identity-mixing matrix shape");
  require(gs.b_epochs.size() == static_cast<size_t>(gs.version) + 1,
          Errc::serialization, "epoch matrix count does not match version");
  for (const auto& b : gs.b_epochs)
    require(b.rows == prm.m && b.cols == prm.l1, Errc::serialization,
            "epoch matrix shape");
  for (const auto& id : gs.revoked_ids)
    expect_modvec(id, prm.p, prm.l2, "revoked identity");
  require(gs.revoked_ids.size() == gs.revoked_names.size(), Errc::serialization,
          "revocation lists out of sync");
  return gs;
}

std::vector<uint8_t> encode_user_secret(const UserSecret& usk, const Params& prm) {
  Writer w;
  write_header(w, WireKind::user_secret, params_digest(prm));
  w.str(usk.name);
  w.modvec(usk.id);
  w.svec(usk.u_id);
  return std::move(w.out);
}

UserSecret decode_user_secret(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::user_secret, params_digest(prm));
  UserSecret usk;
  usk.name = r.str();
  usk.id = r.modvec();
  usk.u_id = r.svec();
  r.finish();
  expect_modvec(usk.id, prm.p, prm.l2, "identity vector");
  require(usk.u_id.size() == prm.m, Errc::serialization, "derived key length");
  return usk;
}

std::vector<uint8_t> encode_function_key(const FunctionKey& fk, const Params& prm) {
  Writer w;
  write_header(w, WireKind::function_key, params_digest(prm));
  w.svec(fk.x);
  w.svec(fk.f);
  w.u32(fk.version);
  return std::move(w.out);
}

FunctionKey decode_function_key(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::function_key, params_digest(prm));
  FunctionKey fk;
  fk.x = r.svec();
  fk.f = r.svec();
  fk.version = r.u32();
  r.finish();
  require(fk.x.size() == prm.l1, Errc::serialization, "function length");
  require(fk.f.size() == prm.m, Errc::serialization, "function key length");
  return fk;
}

std::vector<uint8_t> encode_ciphertext(const Ciphertext& ct, const Params& prm) {
  Writer w;
  write_header(w, WireKind::ciphertext, params_digest(prm));
  w.modvec(ct.c1);
  w.modvec(ct.c2);
  w.u32(ct.version);
  return std::move(w.out);
}

Ciphertext decode_ciphertext(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::ciphertext, params_digest(prm));
  Ciphertext ct;
  ct.c1 = r.modvec();
  ct.c2 = r.modvec();
  ct.version = r.u32();
  r.finish();
  expect_modvec(ct.c1, prm.p, prm.m, "ciphertext body");
  expect_modvec(ct.c2, prm.p, prm.l1, "ciphertext payload");
  return ct;
}

std::vector<uint8_t> encode_directory(const Directory& dir, const Params& prm) {
  Writer w;
  write_header(w, WireKind::directory, params_digest(prm));
  w.modvec(dir.pd1);
  w.modvec(dir.pd2);
  return std::move(w.out);
}

Directory decode_directory(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::directory, params_digest(prm));
  Directory dir;
  dir.pd1 = r.modvec();
  dir.pd2 = r.modvec();
  r.finish();
  expect_modvec(dir.pd1, prm.q, prm.m, "directory entry");
  expect_modvec(dir.pd2, prm.q, prm.l2, "directory entry");
  return dir;
}

std::vector<uint8_t> encode_update_key(const UpdateKey& uk, const Params& prm) {
  Writer w;
  write_header(w, WireKind::update_key, params_digest(prm));
  w.u32(uk.from_version);
  w.u32(uk.to_version);
  w.u64(uk.p);
  w.u64(uk.rows);
  w.u64(uk.cols);
  size_t width = residue_width(uk.p);
  w.out.reserve(w.out.size() + uk.e.size() * width);
  for (uint32_t v : uk.e) w.residue(v, width);
  return std::move(w.out);
}

UpdateKey decode_update_key(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::update_key, params_digest(prm));
  UpdateKey uk;
  uk.from_version = r.u32();
  uk.to_version = r.u32();
  uk.p = r.u64();
  uk.rows = r.u64();
  uk.cols = r.u64();
  require(uk.p == prm.p, Errc::serialization, "update key modulus");
  size_t hm = static_cast<size_t>(prm.h) * prm.m;
  require(uk.rows == hm + prm.l1 &&
              uk.cols == static_cast<size_t>(prm.m) + prm.l1,
          Errc::serialization, "update key shape");
  size_t width = residue_width(uk.p);
  size_t count = uk.rows * uk.cols;
  uk.e.resize(count);
  for (size_t i = 0; i < count; ++i)
    uk.e[i] = static_cast<uint32_t>(r.residue(width, uk.p));
  r.finish();
  return uk;
}

std::vector<uint8_t> encode_update_info(const UpdateInfo& upi, const Params& prm) {
  Writer w;
  write_header(w, WireKind::update_info, params_digest(prm));
  w.u32(upi.to_version);
  w.modvec(upi.upi1);
  w.modvec(upi.upi2);
  w.modvec(upi.v_r);
  w.blob(upi.upi3);
  return std::move(w.out);
}

UpdateInfo decode_update_info(const std::vector<uint8_t>& bytes, const Params& prm) {
  Reader r = open_frame(bytes, WireKind::update_info, params_digest(prm));
  UpdateInfo upi;
  upi.to_version = r.u32();
  upi.upi1 = r.modvec();
  upi.upi2 = r.modvec();
  upi.v_r = r.modvec();
  upi.upi3 = r.blob();
  r.finish();
  expect_modvec(upi.upi1, prm.q, prm.m, "refresh broadcast");
  expect_modvec(upi.upi2, prm.q, prm.l2, "refresh broadcast");
  expect_modvec(upi.v_r, prm.p, prm.l2, "refresh direction");
  require(upi.upi3.size() == (static_cast<size_t>(prm.pack_total_bits) + 7) / 8,
          Errc::serialization, "masked delta length");
  return upi;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::FILE* f = std::fopen(tmp.string().c_str(), "wb");
    require(f != nullptr, Errc::io, "cannot open for writing: " + tmp.string());
    size_t written = bytes.empty() ? 0 : std::fwrite(bytes.data(), 1, bytes.size(), f);
    int rc = std::fclose(f);
    if (written != bytes.size() || rc != 0) {
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(Errc::io, "short write: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    fail(Errc::io, "cannot replace " + path + ": " + ec.message());
  }
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  require(f != nullptr, Errc::io, "cannot open: " + path);
  std::vector<uint8_t> bytes;
  uint8_t buf[65536];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0)
    bytes.insert(bytes.end(), buf, buf + got);
  bool bad = std::ferror(f) != 0;
  std::fclose(f);
  require(!bad, Errc::io, "read error: " + path);
  return bytes;
}

}  // namespace ipfefr
