#include "ipfefr/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "ipfefr/errors.hpp"
#include "ipfefr/gadgets.hpp"
#include "ipfefr/gauss.hpp"
#include "ipfefr/modarith.hpp"
#include "ipfefr/prims.hpp"

namespace ipfefr {

namespace {

void check_function(const SignedVector& x, const Params& prm) {
  require(x.size() == prm.l1, Errc::dimension_mismatch, "function length != l1");
  for (size_t i = 0; i < x.size(); ++i)
    require(x[i] >= 0 && static_cast<uint64_t>(x[i]) < prm.x_bound,
            Errc::bound_exceeded, "function entry outside [0, X)");
}

void check_message(const SignedVector& y, const Params& prm) {
  require(y.size() == prm.l1, Errc::dimension_mismatch, "message length != l1");
  for (size_t i = 0; i < y.size(); ++i)
    require(y[i] >= 0 && static_cast<uint64_t>(y[i]) < prm.y_bound,
            Errc::bound_exceeded, "message entry outside [0, Y)");
}

// v_{x,id} = <id, PRF(k, x)> mod p: the per-institution offset hidden in the
// function key and recovered through the public directory at decryption.
uint64_t function_offset(const MasterSecret& msk, const Params& prm,
                         const ModVector& id, const SignedVector& x) {
  ModVector tags = prf_tags(msk.prf_key, x, prm.p, prm.l2);
  return dot_mod(id, tags);
}

// C + U_ver (mod p): the matrix whose preimages make function keys.
ModMatrix key_target(const MasterPublic& mpk, const GroupPublic& gpk) {
  return mat_add(mpk.c, gpk.u_ver);
}

uint64_t theta_recover(const MasterPublic& mpk, const UserSecret& usk,
                       const ModVector& d2, const ModVector& d1) {
  const Params& prm = mpk.prm;
  ModVector id_q = lift_mod(usk.id, prm.q);
  ModVector uid_q = to_mod(usk.u_id, prm.q);
  uint64_t lhs = dot_mod(id_q, d2);
  uint64_t rhs = dot_mod(uid_q, d1);
  uint64_t noisy = sub_mod(lhs, rhs, prm.q);
  uint64_t step = prm.q / prm.p;  // p^(k-1) exactly
  return decode_round(noisy, prm.q, step, prm.p);
}

uint64_t dec_inner(const MasterPublic& mpk, const UserSecret& usk,
                   const FunctionKey& fk, const Directory& dir,
                   const Ciphertext& ct) {
  const Params& prm = mpk.prm;
  require(usk.id.size() == prm.l2 && usk.u_id.size() == prm.m,
          Errc::dimension_mismatch, "user key shape");
  require(fk.f.size() == prm.m, Errc::dimension_mismatch, "function key shape");
  require(dir.pd1.size() == prm.m && dir.pd2.size() == prm.l2,
          Errc::dimension_mismatch, "directory shape");
  require(ct.c1.size() == prm.m && ct.c2.size() == prm.l1,
          Errc::dimension_mismatch, "ciphertext shape");
  check_function(fk.x, prm);

  // Directory layer: recover this holder's offset theta = v_{x,id}.
  uint64_t theta = theta_recover(mpk, usk, dir.pd2, dir.pd1);

  // Ciphertext layer: mu' = x^T c2 - (f + theta 1)^T c1 (mod p).
  ModVector xm = to_mod(fk.x, prm.p);
  uint64_t lhs = dot_mod(xm, ct.c2);
  u128 acc = 0;
  for (size_t i = 0; i < prm.m; ++i) {
    // f entries lie within +-(p + small); theta < p; their sum fits i128 and
    // reduces safely per term.
    i128 coeff = static_cast<i128>(fk.f[i]) + static_cast<i128>(theta);
    int64_t red = static_cast<int64_t>(coeff % static_cast<i128>(prm.p));
    uint64_t cm = from_signed(red, prm.p);
    acc += static_cast<u128>(cm) * ct.c1[i];
  }
  uint64_t rhs = static_cast<uint64_t>(acc % prm.p);
  uint64_t noisy = sub_mod(lhs, rhs, prm.p);
  uint64_t mu = decode_round(noisy, prm.p, prm.p / prm.k_range, prm.k_range);
  return mu;
}

}  // namespace

SystemKeys system_setup(Rng& rng, const Params& prm) {
  Validation val = validate(prm);
  require(val.ok(), Errc::params_invalid,
          val.violations.empty() ? "invalid params" : val.violations.front());

  SystemKeys keys;
  keys.msk.td = trap_gen(rng, prm.n, prm.m, prm.p, prm.rho_td);
  require(prm.rho1 >= keys.msk.td.quality, Errc::params_invalid,
          "derived rho1 below the sampled trapdoor quality");
  rng.fill_bytes(keys.msk.prf_key.data(), keys.msk.prf_key.size());

  keys.mpk.prm = prm;
  keys.mpk.a = keys.msk.td.a;
  keys.mpk.v = random_matrix(rng, prm.q, prm.n, prm.m);
  keys.mpk.c = random_matrix(rng, prm.p, prm.n, prm.l1);
  return keys;
}

GroupSetupResult group_setup(Rng& rng, const MasterPublic& mpk) {
  const Params& prm = mpk.prm;
  GroupSetupResult out;
  out.gs.d = gauss_matrix(rng, prm.m, prm.l2, prm.rho2);
  out.gs.b_epochs.push_back(gauss_matrix(rng, prm.m, prm.l1, prm.rho1));
  out.gs.version = 0;

  ModMatrix dq = to_mod(out.gs.d, prm.q);
  out.gpk.f = mat_mul(mpk.v, dq);
  ModMatrix b0 = to_mod(out.gs.b_epochs[0], prm.p);
  out.gpk.u_ver = mat_mul(mpk.a, b0);
  out.gpk.version = 0;
  return out;
}

UserSecret ukeygen(const MasterPublic& mpk, GroupState& gs,
                   const std::string& identity) {
  const Params& prm = mpk.prm;
  require(!identity.empty(), Errc::usage, "identity string is empty");
  UserSecret usk;
  usk.name = identity;
  usk.id = hash_identity(identity, prm.p, prm.l2);
  usk.u_id = signed_mat_modvec(gs.d, usk.id);
  if (std::find(gs.members.begin(), gs.members.end(), identity) == gs.members.end())
    gs.members.push_back(identity);
  return usk;
}

const SignedMatrix& ZCache::get(Rng& rng, const MasterSecret& msk,
                                const MasterPublic& mpk, const GroupPublic& gpk) {
  auto it = cache_.find(gpk.version);
  if (it == cache_.end()) {
    ModMatrix target = key_target(mpk, gpk);
    SignedMatrix z = sample_pre(rng, msk.td, target, mpk.prm.rho1);
    it = cache_.emplace(gpk.version, std::move(z)).first;
  }
  return it->second;
}

void ZCache::drop_before(uint32_t version) {
  for (auto it = cache_.begin(); it != cache_.end();) {
    if (it->first < version) it = cache_.erase(it);
    else ++it;
  }
}

FunctionKey fkeygen(Rng& rng, const MasterSecret& msk, const MasterPublic& mpk,
                    const GroupPublic& gpk, const UserSecret& usk,
                    const SignedVector& x, ZCache& zcache) {
  const Params& prm = mpk.prm;
  check_function(x, prm);
  const SignedMatrix& z = zcache.get(rng, msk, mpk, gpk);

  FunctionKey fk;
  fk.x = x;
  fk.version = gpk.version;
  fk.f = signed_mat_vec(z, x);
  uint64_t v = function_offset(msk, prm, usk.id, x);
  for (size_t i = 0; i < fk.f.size(); ++i)
    fk.f[i] -= static_cast<int64_t>(v);
  return fk;
}

Directory dir_publish(Rng& rng, const MasterSecret& msk, const MasterPublic& mpk,
                      const GroupPublic& gpk, const SignedVector& x) {
  const Params& prm = mpk.prm;
  check_function(x, prm);

  ModVector s1 = random_vector(rng, prm.q, prm.n);
  SignedVector e1 = gauss_vector(rng, prm.m, prm.sigma1);
  SignedVector e2 = gauss_vector(rng, prm.l2, prm.sigma1);
  ModVector tags = prf_tags(msk.prf_key, x, prm.p, prm.l2);

  Directory dir;
  dir.pd1 = vec_mat(s1, mpk.v);  // V^T s1
  for (size_t i = 0; i < prm.m; ++i)
    dir.pd1[i] = add_mod(dir.pd1[i], from_signed(e1[i], prm.q), prm.q);

  const uint64_t step = prm.q / prm.p;  // p^(k-1)
  dir.pd2 = vec_mat(s1, gpk.f);  // F^T s1
  for (size_t i = 0; i < prm.l2; ++i) {
    uint64_t t = add_mod(dir.pd2[i], from_signed(e2[i], prm.q), prm.q);
    dir.pd2[i] = add_mod(t, mul_mod(step, tags[i], prm.q), prm.q);
  }
  return dir;
}

Ciphertext enc(Rng& rng, const MasterPublic& mpk, const GroupPublic& gpk,
               const SignedVector& y) {
  const Params& prm = mpk.prm;
  check_message(y, prm);

  ModVector s2 = random_vector(rng, prm.p, prm.n);
  SignedVector e3 = gauss_vector(rng, prm.m, prm.sigma2);
  SignedVector e4 = gauss_vector(rng, prm.l1, prm.sigma2);

  Ciphertext ct;
  ct.version = gpk.version;
  ct.c1 = vec_mat(s2, mpk.a);  // A^T s2
  for (size_t i = 0; i < prm.m; ++i)
    ct.c1[i] = add_mod(ct.c1[i], from_signed(e3[i], prm.p), prm.p);

  ModMatrix cu = key_target(mpk, gpk);
  ct.c2 = vec_mat(s2, cu);  // (C + U_ver)^T s2
  const uint64_t delta = prm.p / prm.k_range;
  for (size_t i = 0; i < prm.l1; ++i) {
    uint64_t t = add_mod(ct.c2[i], from_signed(e4[i], prm.p), prm.p);
    uint64_t msg = mul_mod(delta, static_cast<uint64_t>(y[i]), prm.p);
    ct.c2[i] = add_mod(t, msg, prm.p);
  }
  return ct;
}

uint64_t dec(const MasterPublic& mpk, const UserSecret& usk,
             const FunctionKey& fk, const Directory& dir, const Ciphertext& ct) {
  require(fk.version == ct.version, Errc::version_mismatch,
          "function key and ciphertext are from different epochs");
  return dec_inner(mpk, usk, fk, dir, ct);
}

uint64_t dec_unchecked(const MasterPublic& mpk, const UserSecret& usk,
                       const FunctionKey& fk, const Directory& dir,
                       const Ciphertext& ct) {
  return dec_inner(mpk, usk, fk, dir, ct);
}

GroupPublic group_update(Rng& rng, const MasterPublic& mpk, GroupState& gs,
                         const std::vector<std::string>& revoke) {
  const Params& prm = mpk.prm;
  require(gs.version + 1 <= prm.v_max, Errc::state,
          "operational update cap reached");
  for (const auto& name : revoke) {
    require(std::find(gs.members.begin(), gs.members.end(), name) != gs.members.end(),
            Errc::not_found, "revoked name was never registered: " + name);
    if (std::find(gs.revoked_names.begin(), gs.revoked_names.end(), name) !=
        gs.revoked_names.end())
      continue;
    gs.revoked_names.push_back(name);
    gs.revoked_ids.push_back(hash_identity(name, prm.p, prm.l2));
  }
  gs.b_epochs.push_back(gauss_matrix(rng, prm.m, prm.l1, prm.rho1));
  gs.version += 1;

  GroupPublic gpk;
  gpk.version = gs.version;
  ModMatrix dq = to_mod(gs.d, prm.q);
  gpk.f = mat_mul(mpk.v, dq);
  ModMatrix b = to_mod(gs.b_epochs[gs.version], prm.p);
  gpk.u_ver = mat_mul(mpk.a, b);
  return gpk;
}

UpdateKey uptkeygen(Rng& rng, const MasterSecret& msk, const MasterPublic& mpk,
                    const GroupPublic& new_gpk, const SignedMatrix& z_old) {
  const Params& prm = mpk.prm;
  require(msk.td.p == prm.p && msk.td.n == prm.n && msk.td.m == prm.m,
          Errc::modulus_mismatch, "master key does not match the public key");
  require(new_gpk.version >= 1, Errc::state, "no previous epoch to update from");
  require(z_old.rows == prm.m && z_old.cols == prm.l1, Errc::dimension_mismatch,
          "old preimage matrix shape");
  require(prm.p <= UINT32_MAX, Errc::params_invalid,
          "update-key entries must fit 32 bits");

  const size_t hm = static_cast<size_t>(prm.h) * prm.m;
  UpdateKey uk;
  uk.from_version = new_gpk.version - 1;
  uk.to_version = new_gpk.version;
  uk.p = prm.p;
  uk.rows = hm + prm.l1;
  uk.cols = static_cast<size_t>(prm.m) + prm.l1;
  uk.e.assign(uk.rows * uk.cols, 0);

  ModMatrix cu_new = key_target(mpk, new_gpk);

  // Top block rows: [E1 A + E2 | E1 (C + U_new) + E3 - PowerExpand(Z_old)],
  // built row by row to keep the working set small: one uniform row of E1
  // (length n) generates a full output row.
  std::vector<uint64_t> e1_row(prm.n);
  const uint64_t p = prm.p;
  // Raw products fit a u64 accumulator when n * (p-1)^2 < 2^64; otherwise
  // accumulate in 128 bits. This loop is the scheme's single largest cost.
  const bool narrow =
      p - 1 <= UINT32_MAX &&
      static_cast<u128>(prm.n) * (p - 1) * (p - 1) <
          (static_cast<u128>(1) << 64);
  // Column-major copy of A so the inner dot walks contiguous memory.
  std::vector<uint64_t> a_col(static_cast<size_t>(prm.n) * prm.m);
  for (size_t j = 0; j < prm.n; ++j)
    for (size_t c = 0; c < prm.m; ++c) a_col[c * prm.n + j] = mpk.a.at(j, c);
  for (size_t r = 0; r < hm; ++r) {
    for (size_t j = 0; j < prm.n; ++j) e1_row[j] = rng.below(p);
    uint32_t* out_row = uk.e.data() + r * uk.cols;

    // E1 A row: n-term dot per column.
    if (narrow) {
      for (size_t c = 0; c < prm.m; ++c) {
        const uint64_t* col = a_col.data() + c * prm.n;
        uint64_t acc = 0;
        for (size_t j = 0; j < prm.n; ++j) acc += e1_row[j] * col[j];
        uint64_t val = acc % p;
        int64_t noise = sample_z(rng, 0.0, prm.sigma2);  // E2 entry
        val = add_mod(val, from_signed(noise, p), p);
        out_row[c] = static_cast<uint32_t>(val);
      }
    } else {
      for (size_t c = 0; c < prm.m; ++c) {
        const uint64_t* col = a_col.data() + c * prm.n;
        u128 acc = 0;
        for (size_t j = 0; j < prm.n; ++j)
          acc += static_cast<u128>(e1_row[j]) * col[j];
        uint64_t val = static_cast<uint64_t>(acc % p);
        int64_t noise = sample_z(rng, 0.0, prm.sigma2);  // E2 entry
        val = add_mod(val, from_signed(noise, p), p);
        out_row[c] = static_cast<uint32_t>(val);
      }
    }

    // E1 (C + U_new) row, minus the power expansion of Z_old. Row r of the
    // expansion corresponds to source row i = r / h, weight 2^(r mod h).
    const size_t src_row = r / prm.h;
    const uint32_t bit = static_cast<uint32_t>(r % prm.h);
    const uint64_t weight = pow_mod(2, bit, p);
    for (size_t c = 0; c < prm.l1; ++c) {
      u128 acc = 0;
      for (size_t j = 0; j < prm.n; ++j)
        acc += static_cast<u128>(e1_row[j]) * cu_new.at(j, c);
      uint64_t val = static_cast<uint64_t>(acc % p);
      int64_t noise = sample_z(rng, 0.0, prm.sigma2);  // E3 entry
      val = add_mod(val, from_signed(noise, p), p);
      uint64_t zv = from_signed(z_old.at(src_row, c), p);
      val = sub_mod(val, mul_mod(weight, zv, p), p);
      out_row[prm.m + c] = static_cast<uint32_t>(val);
    }
  }

  // Bottom block: [0 | I_{l1}].
  for (size_t i = 0; i < prm.l1; ++i)
    uk.at(hm + i, prm.m + i) = 1;
  return uk;
}

Ciphertext ct_update(const MasterPublic& mpk, const UpdateKey& uptk,
                     const Ciphertext& ct) {
  const Params& prm = mpk.prm;
  require(ct.version == uptk.from_version, Errc::version_mismatch,
          "ciphertext version does not match the update key's source epoch");
  require(uptk.p == prm.p, Errc::modulus_mismatch, "update key modulus");
  const size_t hm = static_cast<size_t>(prm.h) * prm.m;
  require(uptk.rows == hm + prm.l1 && uptk.cols == static_cast<size_t>(prm.m) + prm.l1,
          Errc::dimension_mismatch, "update key shape");
  require(ct.c1.size() == prm.m && ct.c2.size() == prm.l1,
          Errc::dimension_mismatch, "ciphertext shape");

  // new_ct^T = [bits(c1)^T | c2^T] * uptk. The bit part contributes at most
  // hm terms of size < p <= 2^32 with coefficient 1, so a plain u64
  // accumulator per output column cannot overflow while streaming the matrix
  // row-major (hm * p < 2^64 for every admissible parameter set).
  const uint64_t p = prm.p;
  std::vector<uint64_t> acc(uptk.cols, 0);
  for (size_t i = 0; i < prm.m; ++i) {
    uint64_t v = ct.c1[i];
    for (uint32_t b = 0; b < prm.h; ++b) {
      if ((v >> b) & 1ull) {
        const uint32_t* row = uptk.e.data() + (i * prm.h + b) * uptk.cols;
        for (size_t c = 0; c < uptk.cols; ++c) acc[c] += row[c];
      }
    }
    // Keep headroom: reduce periodically (every row group adds <= h * p).
    if ((i & 1023) == 1023)
      for (auto& a : acc) a %= p;
  }
  for (auto& a : acc) a %= p;

  // c2 part: full-width products, l1 terms, reduced per term.
  for (size_t i = 0; i < prm.l1; ++i) {
    const uint32_t* row = uptk.e.data() + (hm + i) * uptk.cols;
    uint64_t ci = ct.c2[i];
    for (size_t c = 0; c < uptk.cols; ++c)
      acc[c] = add_mod(acc[c], mul_mod(ci, row[c], p), p);
  }

  Ciphertext out;
  out.version = uptk.to_version;
  out.c1 = ModVector(p, prm.m);
  out.c2 = ModVector(p, prm.l1);
  for (size_t i = 0; i < prm.m; ++i) out.c1[i] = acc[i];
  for (size_t i = 0; i < prm.l1; ++i) out.c2[i] = acc[prm.m + i];
  return out;
}

UpdateInfo fupdate(Rng& rng, const MasterPublic& mpk, const GroupState& gs,
                   const GroupPublic& gpk, const SignedVector& x) {
  const Params& prm = mpk.prm;
  check_function(x, prm);
  require(gs.version >= 1, Errc::state, "no epoch step to broadcast");
  require(gpk.version == gs.version, Errc::version_mismatch,
          "group public key is stale");

  UpdateInfo upi;
  upi.to_version = gs.version;

  // Direction orthogonal to every revoked identity. With no revocations any
  // nonzero direction works; the first standard basis vector is the pinned
  // convention (deterministic, and <id, e_0> = id_0 != 0 except with
  // probability 1/p per holder).
  if (gs.revoked_ids.empty()) {
    upi.v_r = ModVector(prm.p, prm.l2);
    upi.v_r[0] = 1;
  } else {
    upi.v_r = solve_nullspace(gs.revoked_ids, prm.p);
  }

  // Epoch secret and its masked broadcast.
  const uint64_t k_t = rng.below(prm.p - 1) + 1;  // nonzero
  ModVector s3 = random_vector(rng, prm.q, prm.n);
  SignedVector e5 = gauss_vector(rng, prm.m, prm.sigma1);
  SignedVector e6 = gauss_vector(rng, prm.l2, prm.sigma1);

  upi.upi1 = vec_mat(s3, mpk.v);
  for (size_t i = 0; i < prm.m; ++i)
    upi.upi1[i] = add_mod(upi.upi1[i], from_signed(e5[i], prm.q), prm.q);

  const uint64_t step = prm.q / prm.p;
  upi.upi2 = vec_mat(s3, gpk.f);
  for (size_t i = 0; i < prm.l2; ++i) {
    uint64_t t = add_mod(upi.upi2[i], from_signed(e6[i], prm.q), prm.q);
    uint64_t masked = mul_mod(k_t, upi.v_r[i], prm.p);
    upi.upi2[i] = add_mod(t, mul_mod(step, masked, prm.q), prm.q);
  }

  // Packed key delta (B_new - B_old) x, XOR-masked by the epoch secret.
  SignedMatrix db = signed_mat_sub(gs.b_epochs[gs.version],
                                   gs.b_epochs[gs.version - 1]);
  SignedVector delta = signed_mat_vec(db, x);
  std::vector<uint8_t> packed = pack_signed(delta, prm.pack_bound);
  std::vector<uint8_t> mask =
      hash_mask(k_t, prm.p, static_cast<size_t>(prm.pack_total_bits));
  require(packed.size() == mask.size(), Errc::state, "mask length mismatch");
  upi.upi3.resize(packed.size());
  for (size_t i = 0; i < packed.size(); ++i)
    upi.upi3[i] = packed[i] ^ mask[i];
  return upi;
}

FunctionKey key_update(const MasterPublic& mpk, const UserSecret& usk,
                       const FunctionKey& fk, const UpdateInfo& upi) {
  const Params& prm = mpk.prm;
  require(upi.to_version == fk.version + 1, Errc::version_mismatch,
          "refresh broadcast targets a different epoch step");
  require(upi.v_r.size() == prm.l2, Errc::dimension_mismatch, "direction shape");

  // A revoked identity is orthogonal to the broadcast direction: the masked
  // secret projects to zero and the epoch secret is unrecoverable.
  uint64_t w = dot_mod(usk.id, upi.v_r);
  require(w != 0, Errc::revoked,
          "identity is orthogonal to the epoch direction (revoked)");

  uint64_t nu = theta_recover(mpk, usk, upi.upi2, upi.upi1);
  uint64_t k_t = mul_mod(nu, inv_mod(w, prm.p), prm.p);

  std::vector<uint8_t> mask =
      hash_mask(k_t, prm.p, static_cast<size_t>(prm.pack_total_bits));
  require(mask.size() == upi.upi3.size(), Errc::serialization,
          "broadcast mask length mismatch");
  std::vector<uint8_t> packed(upi.upi3.size());
  for (size_t i = 0; i < packed.size(); ++i)
    packed[i] = upi.upi3[i] ^ mask[i];
  SignedVector delta = unpack_signed(packed, prm.m, prm.pack_bound);

  FunctionKey out;
  out.x = fk.x;
  out.version = fk.version + 1;
  out.f = signed_vec_add(fk.f, delta);
  return out;
}

}  // namespace ipfefr
