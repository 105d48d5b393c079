#include "wsym/experiments.hpp"

#include <sstream>

#include "wsym/errors.hpp"

namespace wsym {

namespace {

void summarize(ShrinkResult& r) {
  std::vector<double> ns;
  std::vector<double> radii;
  for (const ShrinkRow& row : r.rows) {
    ns.push_back(row.n);
    radii.push_back(row.r_projected);
  }
  r.exponent = fit_power_law(ns, radii);
  r.strictly_decreasing = r.rows.size() >= 2;
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    r.strictly_decreasing = r.strictly_decreasing && radii[i] < radii[i - 1];
  r.pldc_fails = r.strictly_decreasing && r.exponent <= -0.5;
  std::ostringstream os;
  os << (r.pldc_fails ? "(PLDC) fails" : "(PLDC) holds") << ": fitted exponent " << r.exponent
     << (r.strictly_decreasing ? ", radii strictly decreasing" : ", radii not strictly decreasing");
  r.diagnosis = os.str();
}

}  // namespace

ShrinkResult shrink_experiment(const ShrinkOptions& opts) {
  if (opts.n_max < 1) throw PreconditionError("n_max must be >= 1");
  const Vec a = opts.a.size() ? opts.a : Vec(Vec::Unit(opts.d, 0));
  const std::vector<double> s = opts.s_eigs.empty() ? compact_spectrum(opts.d) : opts.s_eigs;
  const CounterexampleTower ct = make_counterexample_tower(opts.d, opts.n_max, a, s, opts.region_radius);

  ShrinkResult out;
  std::vector<MoserFamily> families;
  for (int i = 0; i < ct.tower.size(); ++i) {
    const int n = i + 1;
    const ModelSpace& space = ct.tower.level(i);
    MoserFamily fam(ct.fields[i], Vec::Zero(space.dim()), opts.settings);
    const double r = validity_radius(fam, opts.validity);
    MoserReport rep = validity_only_report(fam, r);
    if (opts.run_flow && r > 0.0) {
      rep = moser_flow(fam, r, opts.flow);
      rep.validity_radius = r;
    }
    ShrinkRow row;
    row.n = n;
    row.dim = space.dim();
    row.r_validity = r;
    row.bound = a.norm() / n;
    row.cond_at_base = flat_extremes(space, fam.omega0().matrix()).kappa;
    out.rows.push_back(row);
    out.reports.push_back(std::move(rep));
    families.push_back(std::move(fam));
  }
  out.assembly = assemble_projective_darboux(out.reports, ct.tower, opts.min_radius);
  for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].r_projected = out.assembly.projected_radius[i];
  UniformBoundOptions ub;
  ub.t_grid = opts.validity.t_grid;
  ub.seed = opts.validity.seed;
  out.uniform = uniform_bound_check(families, opts.bound_k, ub);
  out.within_bound = true;
  for (const ShrinkRow& row : out.rows) out.within_bound = out.within_bound && row.r_validity <= row.bound + opts.fit_tol;
  summarize(out);
  return out;
}

ShrinkResult product_control_experiment(const FormSequence& fs, const ProductControlOptions& opts) {
  if (!(opts.radius > 0.0)) throw PreconditionError("radius must be positive");
  const Tower& tower = fs.tower();

  ShrinkResult out;
  std::vector<MoserFamily> families;
  for (int i = 0; i < tower.size(); ++i) {
    const ModelSpace& space = tower.level(i);
    const FormField field = FormField::constant(fs.form(i), Ball{Vec::Zero(space.dim()), opts.radius});
    MoserFamily fam(field, Vec::Zero(space.dim()), opts.settings);
    const double r = validity_radius(fam, opts.validity);
    MoserReport rep = moser_flow(fam, r, opts.flow);
    rep.validity_radius = r;
    ShrinkRow row;
    row.n = i + 1;
    row.dim = space.dim();
    row.r_validity = r;
    row.bound = opts.radius;
    row.cond_at_base = flat_extremes(space, fam.omega0().matrix()).kappa;
    out.rows.push_back(row);
    out.reports.push_back(std::move(rep));
    families.push_back(std::move(fam));
  }
  out.assembly = assemble_projective_darboux(out.reports, tower, opts.min_radius);
  for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].r_projected = out.assembly.projected_radius[i];
  UniformBoundOptions ub;
  ub.t_grid = opts.validity.t_grid;
  out.uniform = uniform_bound_check(families, 4.0, ub);
  out.within_bound = true;
  for (const ShrinkRow& row : out.rows) out.within_bound = out.within_bound && row.r_validity <= row.bound * (1 + 1e-12);
  summarize(out);
  return out;
}

}  // namespace wsym
