#include "wsym_cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <wsym/errors.hpp>
#include <wsym/experiments.hpp>
#include <wsym/moser.hpp>

namespace wsym::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string error_type(const wsym::Error& e) {
  if (dynamic_cast<const ValidityError*>(&e)) return "ValidityError";
  if (dynamic_cast<const NoChartError*>(&e)) return "NoChartError";
  if (dynamic_cast<const RegionError*>(&e)) return "RegionError";
  if (dynamic_cast<const DegenerateFormError*>(&e)) return "DegenerateFormError";
  if (dynamic_cast<const NotSubmersionError*>(&e)) return "NotSubmersionError";
  if (dynamic_cast<const PreconditionError*>(&e)) return "PreconditionError";
  if (dynamic_cast<const ShapeError*>(&e)) return "ShapeError";
  return "Error";
}

InputError wrong_input(const RunConfig& cfg, const SpecDocument& spec, const std::string& need) {
  return InputError(Diagnostic{cfg.config_path, 0, "/input",
                               cfg.command + " needs " + need + ", got a " + to_string(spec.kind) + " spec"});
}

InputError bad_param(const RunConfig& cfg, const std::string& key, const std::string& msg) {
  return InputError(Diagnostic{cfg.config_path, 0, "/params/" + key, msg});
}

class Csv {
 public:
  explicit Csv(const std::string& header) { os_ << header << '\n'; }
  template <typename... T>
  void row(const T&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double x) { return format_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "1" : "0"; }
  static std::string cell(const std::string& x) { return x; }
  std::ostringstream os_;
};

MoserSettings settings_of(const RunConfig& cfg) {
  MoserSettings s;
  s.quad_nodes = cfg.tol.quad_nodes;
  s.sing_tol = cfg.tol.sing_tol;
  s.cond_cap = cfg.tol.cond_cap;
  return s;
}

ValidityOptions validity_of(const RunConfig& cfg) {
  ValidityOptions v;
  v.seed = cfg.seed;
  v.t_grid = cfg.params.value("t_grid", v.t_grid);
  v.ray_count = cfg.params.value("ray_count", v.ray_count);
  v.coarse_steps = cfg.params.value("coarse_steps", v.coarse_steps);
  return v;
}

json weak_isometry_json(int i, const WeakIsometryReport& w) {
  return {{"bonding", i},
          {"ok", w.ok},
          {"ker_dim", w.ker_dim},
          {"transversality_defect", w.transversality_defect},
          {"direct_sum_defect", w.direct_sum_defect},
          {"max_principal_cosine", w.max_principal_cosine},
          {"pullback_residual", w.pullback_residual},
          {"dense_range", w.dense_range}};
}

json assembly_json(const ProjectiveAssembly& a) {
  return {{"ok", a.ok},
          {"limiting_radius_by_level", a.limiting_radius_by_level},
          {"projected_radius", a.projected_radius},
          {"decay_exponent", a.decay_exponent},
          {"decay_detected", a.decay_detected},
          {"diagnosis", a.diagnosis}};
}

json uniform_json(const UniformBoundReport& u) {
  json rows = json::array();
  for (const auto& r : u.per_level)
    rows.push_back({{"level", r.level},
                    {"dim", r.dim},
                    {"forward_norm", r.forward_norm},
                    {"inverse_norm", r.inverse_norm},
                    {"kumar_norm", r.kumar_norm}});
  return {{"forward_ok", u.forward_ok}, {"inverse_ok", u.inverse_ok}, {"kumar_ok", u.kumar_ok}, {"per_level", rows}};
}

std::string shrink_csv(const ShrinkResult& r) {
  Csv csv("n,dim,r_validity,bound,cond_at_base");
  for (const auto& row : r.rows) csv.row(row.n, row.dim, row.r_validity, row.bound, row.cond_at_base);
  return csv.str();
}

json shrink_rows_json(const ShrinkResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"dim", row.dim},
                    {"r_validity", row.r_validity},
                    {"bound", row.bound},
                    {"cond_at_base", row.cond_at_base},
                    {"r_projected", row.r_projected}});
  return rows;
}

std::string trajectories_csv(const std::vector<std::pair<int, const MoserReport*>>& reports, int width) {
  std::string header = "level,seed_index,t";
  for (int k = 0; k < width; ++k) header += ",x" + std::to_string(k);
  std::ostringstream os;
  os << header << '\n';
  for (const auto& [level, rep] : reports) {
    for (const auto& p : rep->trajectories) {
      os << level << ',' << p.seed_index << ',' << format_double(p.t);
      for (int k = 0; k < width; ++k) os << ',' << (k < p.x.size() ? format_double(p.x(k)) : "");
      os << '\n';
    }
  }
  return os.str();
}

void check_tower(const RunConfig& cfg, const SpecDocument& spec, RunOutcome& out) {
  if (!spec.is_tower()) throw wrong_input(cfg, spec, "a tower spec");
  const double compat_tol = cfg.params.value("compat_tol", 1e-10);
  std::optional<FormSequence> fs = spec.sequence;
  if (!fs) {
    const Tower& t = spec.counterexample->tower;
    Vec point = Vec::Zero(t.level(t.depth()).dim());
    if (cfg.params.contains("point")) {
      point = json_vec(cfg.params["point"]);
      if (point.size() != t.level(t.depth()).dim())
        throw bad_param(cfg, "point", "point must have the top level's dimension " + std::to_string(t.level(t.depth()).dim()));
    }
    fs = counterexample_forms_at(*spec.counterexample, point);
  }
  const Tower& tower = fs->tower();
  const CompatibilityReport comp = check_compatible_sequence(*fs, compat_tol, true, cfg.tol.rank_tol);
  const TowerClassification cls = classify_tower(tower, cfg.tol.rank_tol);

  json dims = json::array();
  for (int i = 0; i < tower.size(); ++i) dims.push_back(tower.level(i).dim());
  json bondings = json::array();
  Csv csv("bonding,ker_dim,transversality_defect,direct_sum_defect,pullback_residual,ok");
  for (std::size_t i = 0; i < comp.levels.size(); ++i) {
    const auto& w = comp.levels[i];
    bondings.push_back(weak_isometry_json(static_cast<int>(i), w));
    csv.row(static_cast<int>(i), w.ker_dim, w.transversality_defect, w.direct_sum_defect, w.pullback_residual, w.ok);
  }
  json failing = json::array();
  for (const auto& [i, j] : comp.failing_composites) failing.push_back({i, j});

  bool pass = comp.ok;
  json decomposition = nullptr;
  if (cfg.params.value("decompose", true) && comp.ok) {
    const BlockDecomposition bd = block_decompose(*fs, 0, tower.depth(), compat_tol, cfg.tol.rank_tol);
    const DecompositionAudit audit = audit_block_decomposition(*fs, bd, 1e-8, cfg.tol.rank_tol);
    json block_dims = json::array();
    for (const auto& b : bd.blocks) block_dims.push_back(b.dim());
    decomposition = {{"level", bd.level},
                     {"block_dims", block_dims},
                     {"reconstruction_condition", bd.reconstruction_condition},
                     {"direct_sum_defect", bd.direct_sum_defect},
                     {"audit",
                      {{"kernel_defect", audit.kernel_defect},
                       {"restriction_injective", audit.restriction_injective},
                       {"restriction_onto", audit.restriction_onto},
                       {"image_defect", audit.image_defect},
                       {"ok", audit.ok(1e-8)}}}};
    pass = pass && audit.ok(1e-8);
  }
  out.exit_code = pass ? kPass : kCheckFailed;
  out.report["result"] = {{"depth", tower.depth()},
                          {"dims", dims},
                          {"classification",
                           {{"reduced", cls.reduced}, {"surjective", cls.surjective}, {"split_kernels", cls.split_kernels}}},
                          {"compatible", comp.ok},
                          {"first_failing_level", comp.first_failing_level},
                          {"failing_composites", failing},
                          {"bondings", bondings},
                          {"decomposition", decomposition}};
  out.csv_files.emplace_back("levels.csv", csv.str());
  std::ostringstream t;
  t << "levels: " << tower.size() << " (depth " << tower.depth() << ")\n";
  t << "compatible: " << (comp.ok ? "yes" : "no");
  if (!comp.ok) t << " (first failing bonding " << comp.first_failing_level << ")";
  t << "\n";
  if (!decomposition.is_null()) t << "block decomposition audit: " << (decomposition["audit"]["ok"].get<bool>() ? "ok" : "FAILED") << "\n";
  out.text = t.str();
}

void moser(const RunConfig& cfg, const SpecDocument& spec, bool dump, RunOutcome& out) {
  const std::vector<FormField> fields = spec.level_fields(cfg.params.value("constant_radius", 1.0));
  const int level = cfg.params.value("level", static_cast<int>(fields.size()) - 1);
  if (level < 0 || level >= static_cast<int>(fields.size()))
    throw bad_param(cfg, "level", "level " + std::to_string(level) + " out of range [0, " + std::to_string(fields.size() - 1) + "]");
  const FormField& field = fields[static_cast<std::size_t>(level)];
  Vec base = Vec::Zero(field.dim());
  if (cfg.params.contains("base")) {
    base = json_vec(cfg.params["base"]);
    if (base.size() != field.dim()) throw bad_param(cfg, "base", "base must have dimension " + std::to_string(field.dim()));
  }

  const ClosednessReport closed = exterior_derivative_residual(field, cfg.params.value("closed_samples", 20), cfg.seed);
  const bool closed_ok = closed.residual <= cfg.tol.closed_tol;
  const MoserFamily family(field, base, settings_of(cfg));
  const double vr = validity_radius(family, validity_of(cfg));
  if (!(vr > 0.0)) throw NoChartError("base point is outside the validity region");
  const double r_start = cfg.params.value("radius", 0.9 * vr);

  FlowOptions fo;
  fo.dt = cfg.tol.dt;
  fo.seed = cfg.seed;
  fo.seed_rays = cfg.params.value("seed_rays", fo.seed_rays);
  fo.shells = cfg.params.value("shells", fo.shells);
  fo.verify_samples = cfg.params.value("verify_samples", fo.verify_samples);
  fo.verify_tol = cfg.params.value("verify_tol", fo.verify_tol);
  fo.fd_step = cfg.params.value("fd_step", fo.fd_step);
  fo.record_trajectories = dump;
  MoserReport rep = moser_flow(family, r_start, fo);
  rep.validity_radius = vr;

  json order = nullptr;
  bool order_ok = true;
  if (cfg.params.value("order_check", false) && !rep.identity_shortcut) {
    const auto dts = cfg.params.value("order_dt", std::vector<double>{0.2, 0.1});
    std::vector<double> res;
    for (double dt : dts) {
      FlowOptions o = fo;
      o.dt = dt;
      o.halving_telemetry = false;
      o.record_trajectories = false;
      res.push_back(moser_flow(family, r_start, o).pullback_residual);
    }
    const double ratio = res[1] > 0.0 ? res[0] / res[1] : std::numeric_limits<double>::infinity();
    order_ok = ratio >= 8.0;
    order = {{"dt", dts}, {"residuals", res}, {"ratio", ratio}, {"ok", order_ok}};
  }

  int survived = 0;
  Csv samples("index,survived,input_norm,output_norm,displacement");
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    survived += s.survived ? 1 : 0;
    samples.row(static_cast<int>(i), s.survived, field.space().norm(s.input - base), field.space().norm(s.output - base),
                field.space().norm(s.output - s.input));
  }
  const bool residual_ok = rep.identity_shortcut || (rep.verified_samples > 0 && rep.pullback_residual <= fo.verify_tol);
  const bool drift_ok = rep.base_drift <= 1e-8;
  const bool pass = closed_ok && residual_ok && drift_ok && order_ok;
  out.exit_code = pass ? kPass : kCheckFailed;
  out.report["result"] = {{"level", level},
                          {"dim", field.dim()},
                          {"base", vec_json(base)},
                          {"closedness",
                           {{"residual", closed.residual},
                            {"evaluated", closed.evaluated},
                            {"skipped", closed.skipped},
                            {"ok", closed_ok}}},
                          {"validity_radius", vr},
                          {"start_radius", rep.start_radius},
                          {"chart_radius", rep.chart_radius},
                          {"pullback_residual", rep.pullback_residual},
                          {"verified_samples", rep.verified_samples},
                          {"steps", rep.steps},
                          {"step_size", rep.step_size},
                          {"lipschitz", rep.lipschitz},
                          {"halving_delta", rep.halving_delta},
                          {"base_drift", rep.base_drift},
                          {"identity_shortcut", rep.identity_shortcut},
                          {"samples_total", static_cast<int>(rep.samples.size())},
                          {"samples_survived", survived},
                          {"order_check", order}};
  out.csv_files.emplace_back("samples.csv", samples.str());
  if (dump) out.csv_files.emplace_back("trajectories.csv", trajectories_csv({{level, &rep}}, field.dim()));
  std::ostringstream t;
  t << "validity radius: " << format_double(vr) << "\n"
    << "chart radius: " << format_double(rep.chart_radius) << " (" << survived << "/" << rep.samples.size()
    << " seeds survived)\n"
    << "pullback residual: " << format_double(rep.pullback_residual) << (residual_ok ? "" : "  FAILED") << "\n"
    << "base drift: " << format_double(rep.base_drift) << (drift_ok ? "" : "  FAILED") << "\n"
    << "closedness residual: " << format_double(closed.residual) << (closed_ok ? "" : "  FAILED") << "\n";
  if (!order.is_null()) t << "order check ratio: " << format_double(order["ratio"].get<double>()) << (order_ok ? "" : "  FAILED") << "\n";
  out.text = t.str();
}

void shrink(const RunConfig& cfg, const SpecDocument& spec, bool dump, RunOutcome& out) {
  if (!spec.counterexample) throw wrong_input(cfg, spec, "a counterexample spec");
  const CounterexampleTower& ct = *spec.counterexample;
  ShrinkOptions o;
  o.d = ct.d;
  o.n_max = ct.tower.size();
  o.a = ct.a;
  o.s_eigs = ct.s_eigs;
  o.region_radius = ct.fields.front().region().radius;
  o.settings = settings_of(cfg);
  o.validity = validity_of(cfg);
  o.run_flow = cfg.params.value("run_flow", false);
  o.flow.dt = cfg.tol.dt;
  o.flow.seed = cfg.seed;
  o.flow.record_trajectories = dump;
  o.min_radius = cfg.params.value("min_radius", o.min_radius);
  o.bound_k = cfg.params.value("bound_k", o.bound_k);
  const std::string expect = cfg.params.value("expect", "fails");
  const ShrinkResult r = shrink_experiment(o);

  const bool pass = expect == "fails" ? (r.pldc_fails && r.within_bound) : !r.pldc_fails;
  out.exit_code = pass ? kPass : kCheckFailed;
  out.report["result"] = {{"rows", shrink_rows_json(r)},
                          {"exponent", r.exponent},
                          {"strictly_decreasing", r.strictly_decreasing},
                          {"within_bound", r.within_bound},
                          {"pldc", r.pldc_fails ? "fails" : "holds"},
                          {"expect", expect},
                          {"diagnosis", r.diagnosis},
                          {"assembly", assembly_json(r.assembly)},
                          {"uniform_bounds", uniform_json(r.uniform)}};
  out.csv_files.emplace_back("shrink.csv", shrink_csv(r));
  if (dump && o.run_flow) {
    std::vector<std::pair<int, const MoserReport*>> reps;
    for (std::size_t i = 0; i < r.reports.size(); ++i) reps.emplace_back(static_cast<int>(i), &r.reports[i]);
    out.csv_files.emplace_back("trajectories.csv", trajectories_csv(reps, r.rows.back().dim));
  }
  std::ostringstream t;
  t << "n  dim  r_validity  bound  cond_at_base\n";
  for (const auto& row : r.rows)
    t << row.n << "  " << row.dim << "  " << format_double(row.r_validity) << "  " << format_double(row.bound) << "  "
      << format_double(row.cond_at_base) << "\n";
  t << r.diagnosis << "\n";
  t << "uniform bounds (K = " << format_double(o.bound_k) << "): forward " << (r.uniform.forward_ok ? "ok" : "exceeded")
    << ", inverse " << (r.uniform.inverse_ok ? "ok" : "exceeded") << "\n";
  out.text = t.str();
}

void product_control(const RunConfig& cfg, const SpecDocument& spec, RunOutcome& out) {
  if (!spec.sequence) throw wrong_input(cfg, spec, "a tower of constant forms (explicit, product or loop)");
  ProductControlOptions o;
  o.radius = cfg.params.value("radius", o.radius);
  o.settings = settings_of(cfg);
  o.validity = validity_of(cfg);
  o.flow.dt = cfg.tol.dt;
  o.flow.seed = cfg.seed;
  o.min_radius = cfg.params.value("min_radius", o.min_radius);
  const std::string expect = cfg.params.value("expect", "holds");
  const ShrinkResult r = product_control_experiment(*spec.sequence, o);
  bool full_balls = true;
  for (const auto& rep : r.reports) full_balls = full_balls && rep.chart_radius >= o.radius * (1 - 1e-12);
  const bool holds = !r.pldc_fails && r.assembly.ok && std::abs(r.exponent) <= 0.05;
  const bool pass = expect == "holds" ? holds && full_balls : !holds;
  out.exit_code = pass ? kPass : kCheckFailed;
  out.report["result"] = {{"rows", shrink_rows_json(r)},
                          {"exponent", r.exponent},
                          {"full_balls", full_balls},
                          {"pldc", r.pldc_fails || !r.assembly.ok ? "fails" : "holds"},
                          {"expect", expect},
                          {"diagnosis", r.diagnosis},
                          {"assembly", assembly_json(r.assembly)}};
  out.csv_files.emplace_back("product_control.csv", shrink_csv(r));
  std::ostringstream t;
  t << "levels: " << r.rows.size() << ", chart radii " << (full_balls ? "all full balls" : "NOT all full balls") << "\n"
    << r.assembly.diagnosis << "\n";
  out.text = t.str();
}

void loop_check(const RunConfig& cfg, const SpecDocument& spec, RunOutcome& out) {
  if (spec.kind != SpecKind::Loop) throw wrong_input(cfg, spec, "a loop spec");
  const FormSequence& fs = *spec.sequence;
  const int modes = spec.params["modes"].get<int>();
  const auto orders = spec.params["orders"].get<std::vector<int>>();
  const double compat_tol = cfg.params.value("compat_tol", 1e-12);
  const double kappa_tol = cfg.params.value("kappa_rel_tol", 1e-9);
  const CompatibilityReport comp = check_compatible_sequence(fs, compat_tol, true, cfg.tol.rank_tol);

  double max_residual = 0.0;
  bool ilb = true;
  for (const auto& w : comp.levels) {
    max_residual = std::max(max_residual, w.pullback_residual);
    ilb = ilb && w.ker_dim == 0 && w.dense_range;
  }
  // κ of the 2m-dimensional Darboux flat, the factor the Sobolev weights multiply.
  const SkewForm darboux = darboux_constant_form(spec.params["m"].get<int>());
  const double ratio = flat_extremes(darboux.space(), darboux.matrix()).kappa;

  bool kappa_ok = true;
  bool identity_ok = true;
  json levels = json::array();
  Csv csv("level,order,dim,kappa,expected_kappa,pullback_residual");
  for (int i = 0; i < fs.size(); ++i) {
    const ModelSpace& space = fs.tower().level(i);
    const double kappa = flat_extremes(space, fs.form(i).matrix()).kappa;
    const double expected = std::pow(1.0 + static_cast<double>(modes) * modes, orders[static_cast<std::size_t>(i)]) * ratio;
    const bool k_ok = std::abs(kappa - expected) <= kappa_tol * expected;
    kappa_ok = kappa_ok && k_ok;
    // A constant form is its own Darboux chart: the Moser family is trivial.
    const FormField field = FormField::constant(fs.form(i), Ball{Vec::Zero(space.dim()), 1.0});
    const MoserFamily family(field, Vec::Zero(space.dim()), settings_of(cfg));
    FlowOptions fo;
    fo.dt = cfg.tol.dt;
    fo.seed = cfg.seed;
    const MoserReport rep = moser_flow(family, 1.0, fo);
    const bool id = rep.identity_shortcut && rep.chart_radius == 1.0;
    identity_ok = identity_ok && id;
    const double residual = i == 0 ? 0.0 : comp.levels[static_cast<std::size_t>(i - 1)].pullback_residual;
    levels.push_back({{"level", i},
                      {"order", orders[static_cast<std::size_t>(i)]},
                      {"dim", space.dim()},
                      {"kappa", kappa},
                      {"expected_kappa", expected},
                      {"kappa_ok", k_ok},
                      {"identity_chart", id}});
    csv.row(i, orders[static_cast<std::size_t>(i)], space.dim(), kappa, expected, residual);
  }
  const bool compat_ok = comp.ok && max_residual <= compat_tol;
  const bool pass = compat_ok && ilb && kappa_ok && identity_ok;
  out.exit_code = pass ? kPass : kCheckFailed;
  json bondings = json::array();
  for (std::size_t i = 0; i < comp.levels.size(); ++i) bondings.push_back(weak_isometry_json(static_cast<int>(i), comp.levels[i]));
  out.report["result"] = {{"compatible", compat_ok},
                          {"max_pullback_residual", max_residual},
                          {"ilb", ilb},
                          {"kappa_ok", kappa_ok},
                          {"identity_charts", identity_ok},
                          {"darboux_kappa", ratio},
                          {"levels", levels},
                          {"bondings", bondings}};
  out.csv_files.emplace_back("loop_levels.csv", csv.str());
  std::ostringstream t;
  t << "ILB compatibility: " << (compat_ok && ilb ? "exact" : "FAILED") << " (max pullback residual "
    << format_double(max_residual) << ")\n"
    << "weakness kappa matches (1+modes^2)^k: " << (kappa_ok ? "yes" : "no") << "\n"
    << "global chart is the identity at every level: " << (identity_ok ? "yes" : "no") << "\n";
  out.text = t.str();
}

}  // namespace

RunOutcome execute(const RunConfig& cfg, bool dump_trajectories) {
  const SpecDocument spec = load_spec(cfg.input.string());
  RunOutcome out;
  out.report = {{"schema_version", "1"},
                {"command", cfg.command},
                {"input", cfg.input_as_written},
                {"spec_kind", to_string(spec.kind)},
                {"seed", cfg.seed},
                {"tolerances",
                 {{"rank_tol", cfg.tol.rank_tol},
                  {"closed_tol", cfg.tol.closed_tol},
                  {"sing_tol", cfg.tol.sing_tol},
                  {"cond_cap", cfg.tol.cond_cap},
                  {"dt", cfg.tol.dt},
                  {"quad_nodes", cfg.tol.quad_nodes}}},
                {"params", cfg.params}};
  try {
    if (cfg.command == "check-tower") check_tower(cfg, spec, out);
    else if (cfg.command == "moser") moser(cfg, spec, dump_trajectories, out);
    else if (cfg.command == "shrink") shrink(cfg, spec, dump_trajectories, out);
    else if (cfg.command == "product-control") product_control(cfg, spec, out);
    else loop_check(cfg, spec, out);
  } catch (const wsym::Error& e) {
    out.exit_code = kCheckFailed;
    json err = {{"type", error_type(e)}, {"message", e.what()}};
    if (const auto* v = dynamic_cast<const ValidityError*>(&e)) {
      err["t"] = v->t();
      err["x"] = vec_json(v->x());
      err["sigma_min"] = v->sigma_min();
    }
    out.report["error"] = err;
    out.report.erase("result");
    out.csv_files.clear();
    out.text = std::string("error: ") + e.what() + "\n";
  }
  out.report["status"] = out.exit_code == kPass ? "pass" : (out.report.contains("error") ? "error" : "fail");
  out.text = cfg.command + ": " + out.report["status"].get<std::string>() + "\n" + out.text;
  return out;
}

std::vector<std::filesystem::path> write_outputs(const RunOutcome& outcome, const std::filesystem::path& dir,
                                                 const std::vector<std::string>& formats) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const auto has = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  const auto put = [&](const std::string& name, const std::string& body) {
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary);
    os << body;
    if (!os) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  };
  if (has("json")) put("report.json", outcome.report.dump(2) + "\n");
  if (has("text")) put("report.txt", outcome.text);
  if (has("csv"))
    for (const auto& [name, body] : outcome.csv_files) put(name, body);
  return written;
}

int validate_path(const std::string& path, std::ostream& out) {
  std::vector<Diagnostic> diags;
  try {
    const LocatedJson src = LocatedJson::load(path);
    if (src.doc().is_object() && src.doc().contains("command")) {
      diags = check_config(src);
      if (diags.empty()) {
        const RunConfig cfg = load_config(path);
        const LocatedJson spec = LocatedJson::load(cfg.input.string());
        diags = check_spec(spec);
      }
    } else {
      diags = check_spec(src);
    }
  } catch (const InputError& e) {
    diags = e.diagnostics();
  }
  for (const auto& d : diags) out << d.str() << "\n";
  out << diags.size() << (diags.size() == 1 ? " error" : " errors") << "\n";
  return diags.empty() ? kPass : kInputError;
}

}  // namespace wsym::cli
