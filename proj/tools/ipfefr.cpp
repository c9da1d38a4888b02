// Role-structured command-line interface to the revocable inner-product
// encryption library. Commands are grouped by role:
//
//   ca  — central authority: setup, fkeygen, uptkeygen
//   gm  — group manager:     group-setup, ukeygen, group-update, fupdate
//   eh  — record holder:     enc
//   cs  — storage relay:     ct-update
//   mi  — institution:       dec, key-update
//
// plus `params` (inspect a named profile) and `bench` (epoch workload
// timings). All state lives in a directory-backed store (--store). Exit
// codes: 0 success, 1 operational failure, 2 usage error. Failures print
// `error: <name>: <detail>` on stderr.

#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipfefr/bench.hpp"
#include "ipfefr/errors.hpp"
#include "ipfefr/params.hpp"
#include "ipfefr/prims.hpp"
#include "ipfefr/scheme.hpp"
#include "ipfefr/wire.hpp"
#include "keystore.hpp"

namespace {

using namespace ipfefr;
using ipfefr::tool::Keystore;
using nlohmann::json;

Rng make_rng(const std::string& seed_hex) {
  if (!seed_hex.empty()) return Rng::from_hex(seed_hex);
  std::random_device rd;
  std::array<uint8_t, 32> seed{};
  for (size_t i = 0; i < seed.size(); i += 4) {
    uint32_t w = rd();
    for (int b = 0; b < 4; ++b) seed[i + b] = static_cast<uint8_t>(w >> (8 * b));
  }
  return Rng(seed);
}

SignedVector parse_vector(const std::string& text, const char* what) {
  SignedVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      long long v = std::stoll(item, &used);
      require(used == item.size(), Errc::usage, "not an integer");
      out.v.push_back(v);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Errc::usage, std::string("bad ") + what + " entry: \"" + item + "\"");
    }
  }
  require(out.size() > 0, Errc::usage, std::string(what) + " must be non-empty");
  return out;
}

std::string hex32(const std::array<uint8_t, 32>& d) {
  static const char* hexd = "0123456789abcdef";
  std::string s;
  for (uint8_t b : d) {
    s.push_back(hexd[b >> 4]);
    s.push_back(hexd[b & 0xF]);
  }
  return s;
}

// Store context shared by every store-backed command.
struct Ctx {
  Keystore ks;
  MasterPublic mpk;

  explicit Ctx(const std::string& store) : ks(store) {
    ks.open_and_lock(false);
    mpk = decode_master_public(ks.load("mpk.bin"));
  }
  const Params& prm() const { return mpk.prm; }

  MasterSecret msk() { return decode_master_secret(ks.load("msk.bin"), prm()); }
  GroupState gstate() { return decode_group_state(ks.load("gstate.bin"), prm()); }
  GroupPublic gpk() { return decode_group_public(ks.load("gpk.bin"), prm()); }
  GroupPublic gpk_v(uint32_t v) {
    return decode_group_public(ks.load("gpk_v" + std::to_string(v) + ".bin"), prm());
  }
  UserSecret usk(const std::string& id) {
    return decode_user_secret(ks.load("usk_" + id + ".bin"), prm());
  }

  void save_gstate(const GroupState& gs) {
    ks.save("gstate.bin", encode_group_state(gs, prm()));
  }
  void save_gpk(const GroupPublic& g) {
    std::vector<uint8_t> bytes = encode_group_public(g, prm());
    ks.save("gpk.bin", bytes);
    ks.save("gpk_v" + std::to_string(g.version) + ".bin", bytes);
  }
};

void note_saved(const Keystore&, const std::string& file, size_t bytes) {
  std::cout << "wrote " << file << " (" << bytes << " bytes)\n";
}

json params_to_json(const Params& p) {
  return json{{"n", p.n},
              {"m", p.m},
              {"l1", p.l1},
              {"l2", p.l2},
              {"n_inst", p.n_inst},
              {"p", p.p},
              {"k", p.k},
              {"q", p.q},
              {"h", p.h},
              {"x_bound", p.x_bound},
              {"y_bound", p.y_bound},
              {"k_range", p.k_range},
              {"rho_td", p.rho_td},
              {"rho1", p.rho1},
              {"rho2", p.rho2},
              {"sigma1", p.sigma1},
              {"sigma2", p.sigma2},
              {"alpha", p.alpha},
              {"alpha1", p.alpha1},
              {"v_max", p.v_max},
              {"v_guaranteed", p.v_guaranteed},
              {"pack_bound", p.pack_bound},
              {"pack_width_bits", p.pack_width_bits},
              {"pack_total_bits", p.pack_total_bits},
              {"margin", p.margin},
              {"fingerprint", hex32(params_digest(p))}};
}

// ---- command bodies ----

int cmd_params(const std::string& profile_name, bool as_json) {
  Params prm = profile(profile_name);
  Validation val = validate(prm);
  if (as_json) {
    json j = params_to_json(prm);
    j["profile"] = profile_name;
    j["warnings"] = val.warnings;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << params_summary(prm);
    for (const auto& w : val.warnings) std::cout << "warning: " << w << "\n";
  }
  return 0;
}

int cmd_bench(uint32_t l1, uint32_t n_inst, uint32_t reps, const std::string& seed,
              bool as_json) {
  BenchConfig cfg;
  cfg.l1 = l1;
  cfg.n_inst = n_inst;
  cfg.reps = reps;
  cfg.seed = seed.empty() ? 1 : std::stoull(seed, nullptr, 16);
  BenchResult r = run_epoch_suite(cfg, &std::cerr);
  if (as_json) {
    json ops = json::array();
    for (const auto& t : r.ops)
      ops.push_back(json{{"name", t.name},
                         {"median_ms", t.median_ms},
                         {"mad_ms", t.mad_ms},
                         {"calls", t.calls}});
    json j{{"l1", r.cfg.l1}, {"n_inst", r.cfg.n_inst}, {"reps", r.cfg.reps},
           {"params", params_to_json(r.prm)}, {"ops", ops}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << bench_table(r);
  }
  return 0;
}

int cmd_ca_setup(const std::string& store, const std::string& profile_name,
                 const std::string& seed) {
  Keystore ks(store);
  ks.open_and_lock(true);
  require(!ks.has_manifest(), Errc::state, "store is already initialized: " + store);
  Params prm = profile(profile_name);
  Rng rng = make_rng(seed);
  SystemKeys keys = system_setup(rng, prm);

  std::vector<uint8_t> mpk_bytes = encode_master_public(keys.mpk);
  std::vector<uint8_t> msk_bytes = encode_master_secret(keys.msk, prm);
  ks.save("mpk.bin", mpk_bytes);
  ks.save("msk.bin", msk_bytes);
  ks.write_manifest(json{{"profile", profile_name},
                         {"params", hex32(params_digest(prm))}});
  note_saved(ks, "mpk.bin", mpk_bytes.size());
  note_saved(ks, "msk.bin", msk_bytes.size());
  std::cout << "profile " << profile_name << ", fingerprint "
            << hex32(params_digest(prm)).substr(0, 16) << "...\n";
  return 0;
}

int cmd_gm_group_setup(const std::string& store, const std::string& seed) {
  Ctx ctx(store);
  require(!ctx.ks.has("gstate.bin"), Errc::state, "group already set up");
  Rng rng = make_rng(seed);
  GroupSetupResult g = group_setup(rng, ctx.mpk);
  ctx.save_gstate(g.gs);
  ctx.save_gpk(g.gpk);
  std::cout << "group at version 0\n";
  return 0;
}

int cmd_gm_ukeygen(const std::string& store, const std::string& id) {
  ipfefr::tool::check_name(id, "--id");
  Ctx ctx(store);
  GroupState gs = ctx.gstate();
  UserSecret usk = ukeygen(ctx.mpk, gs, id);
  std::vector<uint8_t> bytes = encode_user_secret(usk, ctx.prm());
  ctx.ks.save("usk_" + id + ".bin", bytes);
  ctx.save_gstate(gs);
  note_saved(ctx.ks, "usk_" + id + ".bin", bytes.size());
  return 0;
}

int cmd_ca_fkeygen(const std::string& store, const std::string& id,
                   const std::string& x_text, const std::string& seed) {
  ipfefr::tool::check_name(id, "--id");
  SignedVector x = parse_vector(x_text, "--x");
  Ctx ctx(store);
  MasterSecret msk = ctx.msk();
  GroupPublic gpk = ctx.gpk();
  UserSecret usk = ctx.usk(id);
  Rng rng = make_rng(seed);
  ZCache zc;
  FunctionKey fk = fkeygen(rng, msk, ctx.mpk, gpk, usk, x, zc);
  std::string tag = ipfefr::tool::xtag(x);
  std::string fk_file = "fk_" + id + "_" + tag + ".bin";
  std::vector<uint8_t> bytes = encode_function_key(fk, ctx.prm());
  ctx.ks.save(fk_file, bytes);
  note_saved(ctx.ks, fk_file, bytes.size());
  std::string pd_file = "pd_" + tag + ".bin";
  if (!ctx.ks.has(pd_file)) {
    Directory dir = dir_publish(rng, msk, ctx.mpk, gpk, x);
    std::vector<uint8_t> pd_bytes = encode_directory(dir, ctx.prm());
    ctx.ks.save(pd_file, pd_bytes);
    note_saved(ctx.ks, pd_file, pd_bytes.size());
  }
  std::cout << "function key for " << id << " at version " << fk.version << "\n";
  return 0;
}

int cmd_eh_enc(const std::string& store, const std::string& label,
               const std::string& y_text, const std::string& seed) {
  ipfefr::tool::check_name(label, "--label");
  SignedVector y = parse_vector(y_text, "--y");
  Ctx ctx(store);
  GroupPublic gpk = ctx.gpk();
  Rng rng = make_rng(seed);
  Ciphertext ct = enc(rng, ctx.mpk, gpk, y);
  std::string file = "ct_" + label + ".bin";
  std::vector<uint8_t> bytes = encode_ciphertext(ct, ctx.prm());
  ctx.ks.save(file, bytes);
  note_saved(ctx.ks, file, bytes.size());
  std::cout << "ciphertext " << label << " at version " << ct.version << "\n";
  return 0;
}

int cmd_mi_dec(const std::string& store, const std::string& id,
               const std::string& x_text, const std::string& label, bool as_json) {
  ipfefr::tool::check_name(id, "--id");
  ipfefr::tool::check_name(label, "--label");
  SignedVector x = parse_vector(x_text, "--x");
  Ctx ctx(store);
  UserSecret usk = ctx.usk(id);
  std::string tag = ipfefr::tool::xtag(x);
  FunctionKey fk =
      decode_function_key(ctx.ks.load("fk_" + id + "_" + tag + ".bin"), ctx.prm());
  Directory dir = decode_directory(ctx.ks.load("pd_" + tag + ".bin"), ctx.prm());
  Ciphertext ct =
      decode_ciphertext(ctx.ks.load("ct_" + label + ".bin"), ctx.prm());
  uint64_t value = dec(ctx.mpk, usk, fk, dir, ct);
  if (as_json)
    std::cout << json{{"value", value}, {"label", label}, {"id", id}}.dump() << "\n";
  else
    std::cout << value << "\n";
  return 0;
}

int cmd_gm_group_update(const std::string& store,
                        const std::vector<std::string>& revoke,
                        const std::string& seed) {
  Ctx ctx(store);
  GroupState gs = ctx.gstate();
  Rng rng = make_rng(seed);
  GroupPublic gpk = group_update(rng, ctx.mpk, gs, revoke);
  ctx.save_gstate(gs);
  ctx.save_gpk(gpk);
  std::cout << "group now at version " << gpk.version << " ("
            << gs.revoked_names.size() << " revoked)\n";
  return 0;
}

int cmd_ca_uptkeygen(const std::string& store, int64_t to_version_opt,
                     const std::string& seed) {
  Ctx ctx(store);
  MasterSecret msk = ctx.msk();
  uint32_t to_version = to_version_opt >= 0
                            ? static_cast<uint32_t>(to_version_opt)
                            : ctx.gpk().version;
  require(to_version >= 1, Errc::usage, "--to-version must be >= 1");
  GroupPublic gpk_old = ctx.gpk_v(to_version - 1);
  GroupPublic gpk_new = ctx.gpk_v(to_version);
  Rng rng = make_rng(seed);
  ZCache zc;
  const SignedMatrix& z_old = zc.get(rng, msk, ctx.mpk, gpk_old);
  UpdateKey uptk = uptkeygen(rng, msk, ctx.mpk, gpk_new, z_old);
  std::string file = "uptk_v" + std::to_string(to_version) + ".bin";
  std::vector<uint8_t> bytes = encode_update_key(uptk, ctx.prm());
  ctx.ks.save(file, bytes);
  note_saved(ctx.ks, file, bytes.size());
  return 0;
}

int cmd_cs_ct_update(const std::string& store, const std::string& label) {
  ipfefr::tool::check_name(label, "--label");
  Ctx ctx(store);
  std::string file = "ct_" + label + ".bin";
  Ciphertext ct = decode_ciphertext(ctx.ks.load(file), ctx.prm());
  std::string uptk_file = "uptk_v" + std::to_string(ct.version + 1) + ".bin";
  UpdateKey uptk = decode_update_key(ctx.ks.load(uptk_file), ctx.prm());
  Ciphertext out = ct_update(ctx.mpk, uptk, ct);
  std::vector<uint8_t> bytes = encode_ciphertext(out, ctx.prm());
  ctx.ks.save(file, bytes);
  std::cout << "ciphertext " << label << " now at version " << out.version << "\n";
  return 0;
}

int cmd_gm_fupdate(const std::string& store, const std::string& x_text,
                   const std::string& seed) {
  SignedVector x = parse_vector(x_text, "--x");
  Ctx ctx(store);
  GroupState gs = ctx.gstate();
  GroupPublic gpk = ctx.gpk();
  Rng rng = make_rng(seed);
  UpdateInfo upi = fupdate(rng, ctx.mpk, gs, gpk, x);
  std::string file = "upi_v" + std::to_string(upi.to_version) + "_" +
                     ipfefr::tool::xtag(x) + ".bin";
  std::vector<uint8_t> bytes = encode_update_info(upi, ctx.prm());
  ctx.ks.save(file, bytes);
  note_saved(ctx.ks, file, bytes.size());
  return 0;
}

int cmd_mi_key_update(const std::string& store, const std::string& id,
                      const std::string& x_text) {
  ipfefr::tool::check_name(id, "--id");
  SignedVector x = parse_vector(x_text, "--x");
  Ctx ctx(store);
  UserSecret usk = ctx.usk(id);
  std::string tag = ipfefr::tool::xtag(x);
  std::string fk_file = "fk_" + id + "_" + tag + ".bin";
  FunctionKey fk = decode_function_key(ctx.ks.load(fk_file), ctx.prm());
  std::string upi_file =
      "upi_v" + std::to_string(fk.version + 1) + "_" + tag + ".bin";
  UpdateInfo upi = decode_update_info(ctx.ks.load(upi_file), ctx.prm());
  FunctionKey out = key_update(ctx.mpk, usk, fk, upi);
  ctx.ks.save(fk_file, encode_function_key(out, ctx.prm()));
  std::cout << "function key for " << id << " now at version " << out.version
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revocable inner-product functional encryption"};
  app.require_subcommand(1);

  std::string store, seed, profile_name = "micro", id, label, x_text, y_text;
  std::vector<std::string> revoke;
  bool as_json = false;
  uint32_t bench_l1 = 5, bench_n = 5, bench_reps = 3;
  int64_t to_version = -1;

  auto add_store = [&](CLI::App* c) {
    c->add_option("--store", store, "store directory")->required();
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", seed, "hex seed (1..64 digits); random if absent");
  };

  CLI::App* params_cmd = app.add_subcommand("params", "inspect a parameter profile");
  params_cmd->add_option("--profile", profile_name, "micro | toy | full");
  params_cmd->add_flag("--json", as_json, "JSON output");

  CLI::App* bench_cmd = app.add_subcommand("bench", "time the epoch workload");
  bench_cmd->add_option("--l1", bench_l1, "vector length (default 5)");
  bench_cmd->add_option("--n-inst", bench_n, "institutions (default 5)");
  bench_cmd->add_option("--reps", bench_reps, "timed repetitions (default 3)");
  bench_cmd->add_option("--seed", seed, "hex seed (default 1)");
  bench_cmd->add_flag("--json", as_json, "JSON output");

  CLI::App* ca = app.add_subcommand("ca", "central authority");
  ca->require_subcommand(1);
  CLI::App* ca_setup = ca->add_subcommand("setup", "create a store and master keys");
  add_store(ca_setup);
  ca_setup->add_option("--profile", profile_name, "micro | toy | full")->required();
  add_seed(ca_setup);
  CLI::App* ca_fkeygen = ca->add_subcommand("fkeygen", "issue a function key");
  add_store(ca_fkeygen);
  ca_fkeygen->add_option("--id", id, "institution")->required();
  ca_fkeygen->add_option("--x", x_text, "function vector, comma separated")->required();
  add_seed(ca_fkeygen);
  CLI::App* ca_uptk = ca->add_subcommand("uptkeygen", "issue a re-encryption key");
  add_store(ca_uptk);
  ca_uptk->add_option("--to-version", to_version, "target epoch (default: current)");
  add_seed(ca_uptk);

  CLI::App* gm = app.add_subcommand("gm", "group manager");
  gm->require_subcommand(1);
  CLI::App* gm_setup = gm->add_subcommand("group-setup", "create the group");
  add_store(gm_setup);
  add_seed(gm_setup);
  CLI::App* gm_ukeygen = gm->add_subcommand("ukeygen", "register an institution");
  add_store(gm_ukeygen);
  gm_ukeygen->add_option("--id", id, "institution")->required();
  CLI::App* gm_update = gm->add_subcommand("group-update", "advance the epoch");
  add_store(gm_update);
  gm_update->add_option("--revoke", revoke, "institution to revoke (repeatable)");
  add_seed(gm_update);
  CLI::App* gm_fupdate = gm->add_subcommand("fupdate", "broadcast a key refresh");
  add_store(gm_fupdate);
  gm_fupdate->add_option("--x", x_text, "function vector")->required();
  add_seed(gm_fupdate);

  CLI::App* eh = app.add_subcommand("eh", "record holder");
  eh->require_subcommand(1);
  CLI::App* eh_enc = eh->add_subcommand("enc", "encrypt a record vector");
  add_store(eh_enc);
  eh_enc->add_option("--label", label, "ciphertext label")->required();
  eh_enc->add_option("--y", y_text, "record vector, comma separated")->required();
  add_seed(eh_enc);

  CLI::App* cs = app.add_subcommand("cs", "storage relay");
  cs->require_subcommand(1);
  CLI::App* cs_update = cs->add_subcommand("ct-update", "re-encrypt forward one epoch");
  add_store(cs_update);
  cs_update->add_option("--label", label, "ciphertext label")->required();

  CLI::App* mi = app.add_subcommand("mi", "institution");
  mi->require_subcommand(1);
  CLI::App* mi_dec = mi->add_subcommand("dec", "decrypt an inner product");
  add_store(mi_dec);
  mi_dec->add_option("--id", id, "institution")->required();
  mi_dec->add_option("--x", x_text, "function vector")->required();
  mi_dec->add_option("--label", label, "ciphertext label")->required();
  mi_dec->add_flag("--json", as_json, "JSON output");
  CLI::App* mi_keyup = mi->add_subcommand("key-update", "refresh a function key");
  add_store(mi_keyup);
  mi_keyup->add_option("--id", id, "institution")->required();
  mi_keyup->add_option("--x", x_text, "function vector")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (params_cmd->parsed()) return cmd_params(profile_name, as_json);
    if (bench_cmd->parsed()) return cmd_bench(bench_l1, bench_n, bench_reps, seed, as_json);
    if (ca->parsed()) {
      if (ca_setup->parsed()) return cmd_ca_setup(store, profile_name, seed);
      if (ca_fkeygen->parsed()) return cmd_ca_fkeygen(store, id, x_text, seed);
      if (ca_uptk->parsed()) return cmd_ca_uptkeygen(store, to_version, seed);
    }
    if (gm->parsed()) {
      if (gm_setup->parsed()) return cmd_gm_group_setup(store, seed);
      if (gm_ukeygen->parsed()) return cmd_gm_ukeygen(store, id);
      if (gm_update->parsed()) return cmd_gm_group_update(store, revoke, seed);
      if (gm_fupdate->parsed()) return cmd_gm_fupdate(store, x_text, seed);
    }
    if (eh->parsed() && eh_enc->parsed()) return cmd_eh_enc(store, label, y_text, seed);
    if (cs->parsed() && cs_update->parsed()) return cmd_cs_ct_update(store, label);
    if (mi->parsed()) {
      if (mi_dec->parsed()) return cmd_mi_dec(store, id, x_text, label, as_json);
      if (mi_keyup->parsed()) return cmd_mi_key_update(store, id, x_text);
    }
    std::cerr << "error: usage: no command selected\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
