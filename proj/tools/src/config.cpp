#include "wsym_cli/config.hpp"

#include <map>

namespace wsym::cli {

const std::vector<std::string>& params_for(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"check-tower", {"compat_tol", "point", "decompose"}},
      {"moser",
       {"level", "base", "radius", "constant_radius", "verify_tol", "seed_rays", "shells", "verify_samples", "fd_step",
        "order_check", "order_dt", "ray_count", "t_grid", "coarse_steps", "closed_samples"}},
      {"shrink", {"ray_count", "t_grid", "coarse_steps", "run_flow", "min_radius", "bound_k", "expect"}},
      {"product-control", {"radius", "ray_count", "t_grid", "coarse_steps", "min_radius", "expect"}},
      {"loop-check", {"compat_tol", "kappa_rel_tol"}},
  };
  static const std::vector<std::string> none;
  const auto it = table.find(command);
  return it == table.end() ? none : it->second;
}

namespace {

void check_params(Checker& c, const std::string& command) {
  const json* p = c.get("/params");
  if (!p) return;
  if (!c.object("/params", params_for(command))) return;
  const auto has = [&](const char* k) { return p->contains(k); };
  for (const char* k : {"compat_tol", "verify_tol", "fd_step", "radius", "constant_radius", "min_radius", "bound_k",
                        "kappa_rel_tol"})
    if (has(k)) c.number(child("/params", k), true);
  for (const char* k : {"ray_count", "level", "seed_rays", "verify_samples", "closed_samples"})
    if (has(k)) c.integer(child("/params", k), 0);
  for (const char* k : {"t_grid", "coarse_steps"})
    if (has(k)) c.integer(child("/params", k), 2);
  if (has("shells")) c.integer("/params/shells", 1);
  for (const char* k : {"decompose", "run_flow", "order_check"})
    if (has(k)) c.boolean(child("/params", k));
  if (has("expect")) c.string_in("/params/expect", {"holds", "fails"});
  if (has("point")) c.number_array("/params/point");
  if (has("base")) c.number_array("/params/base");
  if (has("order_dt")) {
    if (c.number_array("/params/order_dt", true) && (*p)["order_dt"].size() != 2)
      c.error("/params/order_dt", "expected two step sizes [dt, dt/2]");
  }
}

}  // namespace

std::vector<Diagnostic> check_config(const LocatedJson& src) {
  Checker c(src);
  if (!c.object("", {"command", "input", "tolerances", "seed", "output", "formats", "params", "description"}))
    return c.diagnostics();
  std::string command;
  if (c.require("/command") && c.string_in("/command", kCommands)) command = src.doc()["command"].get<std::string>();
  if (c.require("/input") && !src.doc()["input"].is_string()) c.error("/input", "expected a path string");
  if (c.get("/tolerances") &&
      c.object("/tolerances", {"rank_tol", "closed_tol", "sing_tol", "cond_cap", "dt", "quad_nodes"})) {
    for (const auto& [k, _] : src.doc()["tolerances"].items()) {
      if (k == "quad_nodes") c.integer("/tolerances/quad_nodes", 1);
      else c.number(child("/tolerances", k), true);
    }
  }
  if (c.get("/seed")) c.integer("/seed", 0);
  if (c.get("/output") && !src.doc()["output"].is_string()) c.error("/output", "expected a path string");
  if (const json* f = c.get("/formats")) {
    if (!f->is_array() || f->empty()) {
      c.error("/formats", "expected a non-empty array of formats");
    } else {
      for (std::size_t i = 0; i < f->size(); ++i) c.string_in(child("/formats", i), kFormats);
    }
  }
  if (!command.empty()) check_params(c, command);
  return c.diagnostics();
}

RunConfig load_config(const std::string& path) {
  const LocatedJson src = LocatedJson::load(path);
  auto diags = check_config(src);
  if (!diags.empty()) throw InputError(std::move(diags));
  const json& d = src.doc();
  RunConfig cfg;
  cfg.config_path = path;
  cfg.command = d["command"].get<std::string>();
  cfg.input_as_written = d["input"].get<std::string>();
  const std::filesystem::path in(cfg.input_as_written);
  cfg.input = in.is_absolute() ? in : std::filesystem::path(path).parent_path() / in;
  if (d.contains("tolerances")) {
    const json& t = d["tolerances"];
    cfg.tol.rank_tol = t.value("rank_tol", cfg.tol.rank_tol);
    cfg.tol.closed_tol = t.value("closed_tol", cfg.tol.closed_tol);
    cfg.tol.sing_tol = t.value("sing_tol", cfg.tol.sing_tol);
    cfg.tol.cond_cap = t.value("cond_cap", cfg.tol.cond_cap);
    cfg.tol.dt = t.value("dt", cfg.tol.dt);
    cfg.tol.quad_nodes = t.value("quad_nodes", cfg.tol.quad_nodes);
  }
  cfg.seed = d.value("seed", std::uint64_t{0});
  cfg.output = d.value("output", "wsym-out/" + cfg.command);
  if (d.contains("formats")) cfg.formats = d["formats"].get<std::vector<std::string>>();
  cfg.params = d.value("params", json::object());
  return cfg;
}

}  // namespace wsym::cli
