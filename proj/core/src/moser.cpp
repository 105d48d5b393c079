#include "wsym/moser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wsym/errors.hpp"
#include "wsym/rk4.hpp"

namespace wsym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat reskew(const Mat& m) { return 0.5 * (m - m.transpose()); }

/// Uniform sample of the ball of the given radius around center, in the gram norm.
Vec sample_in_ball(Rng& rng, const ModelSpace& space, const Vec& center, double radius) {
  const auto n = center.size();
  const Vec dir = space.orthonormal_frame() * random_unit(rng, n);
  const double r = radius * std::pow(random_uniform(rng), 1.0 / static_cast<double>(n));
  return center + r * dir;
}

Vec gram_unit(const ModelSpace& space, const Vec& v) {
  const double n = space.norm(v);
  if (n == 0.0) throw ShapeError("zero ray direction");
  return v / n;
}

std::vector<double> time_grid(int t_grid) {
  if (t_grid < 2) return {1.0};
  std::vector<double> ts;
  for (int k = 0; k < t_grid; ++k) ts.push_back(static_cast<double>(k) / (t_grid - 1));
  return ts;
}

/// X^t_x. With enforce_cap, also fails once κ exceeds cond_cap.
Vec eval_field(const MoserFamily& family, double t, const Vec& x, bool checked, bool enforce_cap) {
  if (family.trivial()) return Vec::Zero(family.dim());
  const Mat m = family.at(t, x);
  if (checked) {
    const Conditioning c = flat_extremes(family.space(), m);
    const MoserSettings& s = family.settings();
    if (!(c.sigma_min > s.sing_tol * c.sigma_max) || (enforce_cap && c.kappa > s.cond_cap))
      throw ValidityError(t, x, c.sigma_min);
  }
  const Vec alpha = radial_primitive(family.omega_bar(), x, family.rule());
  return m.partialPivLu().solve(alpha);
}

double smallest_row_singular_value(const Mat& normalized) {
  if (normalized.rows() == 0) return 1.0;
  const Vec s = singular_values(normalized);
  if (s.size() < normalized.rows()) return 0.0;
  return s(normalized.rows() - 1);
}

}  // namespace

MoserFamily::MoserFamily(const FormField& omega, const Vec& base, MoserSettings settings)
    : base_(base),
      omega0_(omega.space(), reskew(omega(base))),
      omega_(omega),
      omega_bar_(omega),
      settings_(settings),
      rule_(gauss_legendre(settings.quad_nodes, 0.0, 1.0)) {
  if (base.size() != omega.dim()) throw ShapeError("base point has the wrong dimension");
  if (!(settings_.sing_tol > 0.0) || !(settings_.cond_cap > 1.0))
    throw PreconditionError("sing_tol must be > 0 and cond_cap > 1");
  const double radius = omega.region().radius - omega.space().norm(base - omega.region().center);
  if (!(radius > 0.0)) throw RegionError("base point is not interior to the field's region");
  omega_bar_ = omega.restricted_to(Ball{base, radius}).minus_constant(omega0_.matrix());
}

Mat MoserFamily::at(double t, const Vec& x) const { return omega0_.matrix() + t * omega_bar_(x); }

FormField MoserFamily::interpolant(double t) const {
  const Mat w0 = omega0_.matrix();
  const FormField bar = omega_bar_;
  return FormField(
      space(), omega_bar_.region(), [w0, bar, t](const Vec& x) { return Mat(w0 + t * bar(x)); },
      [bar, t](const Vec& x, const Vec& h) { return Mat(t * bar.derivative(x, h)); });
}

ClosednessReport exterior_derivative_residual(const FormField& field, int samples, std::uint64_t seed,
                                              int triples_per_point) {
  if (samples < 1) throw PreconditionError("samples must be >= 1");
  Rng rng(seed);
  ClosednessReport r;
  const int n = field.dim();
  const Ball& region = field.region();
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_in_ball(rng, field.space(), region.center, 0.9 * region.radius);
    if (!field.has_analytic_derivative()) {
      // The stencil must stay in the region.
      const double reach = field.fd_step() * std::sqrt(static_cast<double>(n));
      if (field.space().norm(x - region.center) + reach > region.radius) {
        ++r.skipped;
        continue;
      }
    }
    for (int k = 0; k < triples_per_point; ++k) {
      const Vec a = random_unit(rng, n);
      const Vec b = random_unit(rng, n);
      const Vec c = random_unit(rng, n);
      const double d = b.dot(field.derivative(x, a) * c) + c.dot(field.derivative(x, b) * a) +
                       a.dot(field.derivative(x, c) * b);
      r.residual = std::max(r.residual, std::abs(d));
    }
    ++r.evaluated;
  }
  return r;
}

Vec radial_primitive(const FormField& field_bar, const Vec& x, const QuadratureRule& rule01) {
  if (x.size() != field_bar.dim()) throw ShapeError("point has the wrong dimension");
  if (!field_bar.contains(x, 1e-12)) throw RegionError("point lies outside the field's ball");
  const Vec& c = field_bar.region().center;
  const Vec d = x - c;
  Vec alpha = Vec::Zero(x.size());
  if (d.isZero(0.0)) return alpha;
  for (std::size_t k = 0; k < rule01.nodes.size(); ++k) {
    const double s = rule01.nodes[k];
    alpha.noalias() += (rule01.weights[k] * s) * (field_bar(Vec(c + s * d)).transpose() * d);
  }
  return alpha;
}

Vec radial_primitive(const FormField& field_bar, const Vec& x, int quad_nodes) {
  return radial_primitive(field_bar, x, gauss_legendre(quad_nodes, 0.0, 1.0));
}

Vec moser_vector_field(const MoserFamily& family, double t, const Vec& x) {
  return eval_field(family, t, x, true, false);
}

Conditioning flat_extremes(const ModelSpace& space, const Mat& omega) {
  Mat f;
  if (space.has_identity_gram()) {
    f = omega;
  } else {
    const Mat& w = space.orthonormal_frame();
    f = w.transpose() * omega.transpose() * w;
  }
  Conditioning c;
  // The eigenvalues of fᵀf are much cheaper than an SVD but square the
  // condition number, so badly conditioned cases go through the SVD.
  const Eigen::SelfAdjointEigenSolver<Mat> es(f.transpose() * f, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) > 1e-8 * ev(ev.size() - 1)) {
    c.sigma_max = std::sqrt(ev(ev.size() - 1));
    c.sigma_min = std::sqrt(ev(0));
  } else {
    const Vec s = singular_values(f);
    c.sigma_max = s(0);
    c.sigma_min = s(s.size() - 1);
  }
  c.kappa = c.sigma_min > 0.0 ? c.sigma_max / c.sigma_min : kInf;
  return c;
}

namespace {

class MarginProbe {
 public:
  MarginProbe(const MoserFamily& family, const ValidityOptions& opts, bool skip_t0)
      : family_(family), times_(time_grid(opts.t_grid)) {
    // ω⁰ is constant in x, so t = 0 only needs checking once.
    if (skip_t0 && times_.size() > 1) times_.erase(times_.begin());
    const double cap = opts.cond_cap > 0.0 ? opts.cond_cap : family.settings().cond_cap;
    log_cap_ = std::log(std::min(cap, 1.0 / family.settings().sing_tol));
  }

  /// log(cap) − max_t log κ_t(x); negative means outside the validity set.
  double operator()(const Vec& x) const {
    double worst = -kInf;
    for (double t : times_) {
      const Conditioning c = flat_extremes(family_.space(), family_.at(t, x));
      if (!(c.sigma_max > 0.0) || !(c.sigma_min > 0.0)) return -kInf;
      worst = std::max(worst, std::log(c.kappa));
    }
    return log_cap_ - worst;
  }

 private:
  const MoserFamily& family_;
  std::vector<double> times_;
  double log_cap_ = 0.0;
};

// Good side of a bracket [good, bad] after bisection.
double bisect_crossing(const std::function<double(double)>& m, double good, double bad) {
  for (int it = 0; it < 40 && (bad - good) > 1e-12 * std::max(1.0, bad); ++it) {
    const double mid = 0.5 * (good + bad);
    if (m(mid) < 0.0) bad = mid;
    else good = mid;
  }
  return good;
}

// Golden-section minimization on [a, b]; returns (argmin, min).
std::pair<double, double> golden_min(const std::function<double(double)>& m, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = m(c);
  double fd = m(d);
  for (int it = 0; it < 40; ++it) {
    if (fc < 0.0) return {c, fc};
    if (fd < 0.0) return {d, fd};
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = m(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = m(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// First s in (0, limit] where the margin along the ray turns negative, or limit.
double first_failure(const std::function<double(double)>& m, double limit, int coarse) {
  const double h = limit / coarse;
  std::vector<double> vals(static_cast<std::size_t>(coarse + 1), 0.0);
  vals[0] = m(0.0);
  vals[1] = m(h);
  for (int k = 1; k <= coarse; ++k) {
    if (vals[k] < 0.0) return bisect_crossing(m, (k - 1) * h, k * h);
    if (k == coarse) break;
    vals[k + 1] = m((k + 1) * h);
    // A dip narrower than the coarse step shows up as a local minimum.
    if (vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1]) {
      const auto [s_min, v_min] = golden_min(m, (k - 1) * h, (k + 1) * h);
      if (v_min < 0.0) return bisect_crossing(m, (k - 1) * h, s_min);
    }
  }
  return limit;
}

}  // namespace

double validity_radius(const MoserFamily& family, const ValidityOptions& opts) {
  if (opts.coarse_steps < 2) throw PreconditionError("coarse_steps must be >= 2");
  const Vec& x0 = family.base();
  if (MarginProbe(family, opts, false)(x0) < 0.0) return 0.0;
  // ω^t = ω⁰ for every t, so the base check covers the whole ball.
  if (family.trivial()) return family.radius();
  const MarginProbe margin(family, opts, true);
  const double limit = family.radius();

  std::vector<Vec> rays;
  for (const Vec& p : family.omega_bar().probe_directions()) rays.push_back(gram_unit(family.space(), p));
  for (const Vec& p : opts.extra_rays) rays.push_back(gram_unit(family.space(), p));
  Rng rng(opts.seed);
  for (int k = 0; k < opts.ray_count; ++k)
    rays.push_back(family.space().orthonormal_frame() * random_unit(rng, family.dim()));

  double r = limit;
  for (const Vec& dir : rays) {
    const std::function<double(double)> along = [&](double s) { return margin(Vec(x0 + s * dir)); };
    r = std::min(r, first_failure(along, r, std::max(2, static_cast<int>(std::ceil(opts.coarse_steps * r / limit)))));
    if (r == 0.0) break;
  }
  return r;
}

DarbouxChart::DarbouxChart(MoserFamily family, double dt) : family_(std::move(family)), dt_(dt) {
  if (!(dt_ > 0.0) || dt_ > 1.0) throw PreconditionError("dt must lie in (0, 1]");
}

int DarbouxChart::steps() const { return step_count(0.0, 1.0, dt_); }

Vec DarbouxChart::flow(const Vec& x, double t, bool check_validity) const {
  if (family_.trivial() || t == 0.0) return x;
  const auto f = [&](double tau, const Vec& y) { return eval_field(family_, tau, y, check_validity, check_validity); };
  return rk4_integrate(f, x, 0.0, t, step_count(0.0, t, dt_));
}

Vec DarbouxChart::inverse(const Vec& y, bool check_validity) const {
  if (family_.trivial()) return y;
  const auto f = [&](double tau, const Vec& z) { return eval_field(family_, tau, z, check_validity, check_validity); };
  return rk4_integrate(f, y, 1.0, 0.0, steps());
}

MoserReport validity_only_report(const MoserFamily& family, double validity_radius) {
  MoserReport r;
  r.base = family.base();
  r.start_radius = validity_radius;
  r.chart_radius = validity_radius;
  r.validity_radius = validity_radius;
  r.identity_shortcut = family.trivial();
  return r;
}

MoserReport moser_flow(const MoserFamily& family, double r_start, const FlowOptions& opts) {
  if (!(r_start > 0.0)) throw PreconditionError("r_start must be positive");
  if (r_start > family.radius() * (1.0 + 1e-12))
    throw PreconditionError("r_start exceeds the family's region");

  MoserReport rep;
  rep.base = family.base();
  auto chart = std::make_shared<DarbouxChart>(family, opts.dt);
  rep.chart = chart;
  rep.start_radius = r_start;
  rep.validity_radius = r_start;
  rep.steps = chart->steps();
  rep.step_size = 1.0 / rep.steps;

  const Vec& x0 = family.base();
  const ModelSpace& space = family.space();
  Rng rng(opts.seed);

  std::vector<Vec> seeds{x0};
  std::vector<double> seed_radius{0.0};
  for (int k = 0; k < opts.seed_rays; ++k) {
    const Vec dir = space.orthonormal_frame() * random_unit(rng, family.dim());
    for (int s = 1; s <= opts.shells; ++s) {
      const double rad = r_start * s / opts.shells;
      seeds.push_back(x0 + rad * dir);
      seed_radius.push_back(rad);
    }
  }

  if (family.trivial()) {
    rep.identity_shortcut = true;
    rep.chart_radius = r_start;
    rep.steps = 0;
    for (const Vec& s : seeds) rep.samples.push_back({s, s, true});
    return rep;
  }

  // Empirical Lipschitz constant of X^t from nearby pairs in the start ball.
  {
    const double delta = 1e-4 * r_start;
    for (double t : {0.0, 0.5, 1.0}) {
      for (int k = 0; k < 8; ++k) {
        const Vec a = sample_in_ball(rng, space, x0, (1.0 - 1e-3) * r_start);
        const Vec b = a + delta * (space.orthonormal_frame() * random_unit(rng, family.dim()));
        if (space.norm(b - x0) > r_start) continue;
        try {
          const Vec xa = eval_field(family, t, a, false, false);
          const Vec xb = eval_field(family, t, b, false, false);
          rep.lipschitz = std::max(rep.lipschitz, space.norm(xa - xb) / space.norm(a - b));
        } catch (const Error&) {
        }
      }
    }
    if (rep.lipschitz * rep.step_size > opts.stability_bound)
      throw NoChartError("stability guard: lipschitz*dt = " + std::to_string(rep.lipschitz * rep.step_size));
  }

  const int stride = std::max(1, rep.steps / 100);
  double min_failed = kInf;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Vec& s = seeds[i];
    int step = 0;
    const auto f = [&](double tau, const Vec& y) { return eval_field(family, tau, y, true, true); };
    const auto observe = [&](double t, const Vec& y) {
      ++step;
      if (i == 0) rep.base_drift = std::max(rep.base_drift, space.norm(y - x0));
      if (opts.record_trajectories && (step % stride == 0 || step == rep.steps))
        rep.trajectories.push_back({static_cast<int>(i), t, y});
    };
    if (opts.record_trajectories) rep.trajectories.push_back({static_cast<int>(i), 0.0, s});
    try {
      const Vec out = rk4_integrate(f, s, 0.0, 1.0, rep.steps, observe);
      rep.samples.push_back({s, out, true});
    } catch (const Error& e) {
      if (i == 0) throw NoChartError(std::string("base trajectory failed: ") + e.what());
      rep.samples.push_back({s, s, false});
      min_failed = std::min(min_failed, seed_radius[i]);
    }
  }

  if (min_failed == kInf) {
    rep.chart_radius = r_start;
  } else {
    rep.chart_radius = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (rep.samples[i].survived && seed_radius[i] < min_failed)
        rep.chart_radius = std::max(rep.chart_radius, seed_radius[i]);
    }
  }

  std::vector<Vec> verify;
  for (std::size_t i = 0; i < seeds.size() && static_cast<int>(verify.size()) < opts.verify_samples; ++i) {
    if (rep.samples[i].survived && seed_radius[i] <= rep.chart_radius) verify.push_back(seeds[i]);
  }

  if (opts.halving_telemetry) {
    const DarbouxChart half(family, 0.5 / rep.steps);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!rep.samples[i].survived || seed_radius[i] > rep.chart_radius) continue;
      rep.halving_delta = std::max(rep.halving_delta, space.norm(half.apply(seeds[i]) - rep.samples[i].output));
    }
  }

  if (!verify.empty()) {
    const auto apply = [chart](const Vec& x) { return chart->apply(x); };
    const ChartVerification v =
        verify_darboux_chart(apply, family.omega(), family.omega0(), verify, opts.verify_tol, opts.fd_step);
    rep.pullback_residual = v.residual;
    rep.verified_samples = v.evaluated;
  }
  return rep;
}

ChartVerification verify_darboux_chart(const std::function<Vec(const Vec&)>& chart, const FormField& omega,
                                       const SkewForm& omega0, const std::vector<Vec>& samples, double tol,
                                       double fd_step) {
  ChartVerification out;
  const int n = omega.dim();
  for (const Vec& x : samples) {
    try {
      if (!omega.contains(x)) {
        ++out.skipped;
        continue;
      }
      const Vec y = chart(x);
      if (!omega.contains(y)) {
        ++out.skipped;
        continue;
      }
      Mat jac(n, n);
      for (int k = 0; k < n; ++k) {
        Vec e = Vec::Zero(n);
        e(k) = fd_step;
        jac.col(k) = (-chart(x + 2.0 * e) + 8.0 * chart(x + e) - 8.0 * chart(x - e) + chart(x - 2.0 * e)) /
                     (12.0 * fd_step);
      }
      const Mat pulled = jac.transpose() * omega(y) * jac;
      out.residual = std::max(out.residual, max_abs(pulled - omega0.matrix()));
      ++out.evaluated;
    } catch (const Error&) {
      ++out.skipped;
    }
  }
  out.ok = out.evaluated > 0 && out.residual <= tol;
  return out;
}

UniformBoundReport uniform_bound_check(const std::vector<MoserFamily>& families, double k,
                                       const UniformBoundOptions& opts) {
  UniformBoundReport rep;
  rep.forward_ok = rep.inverse_ok = rep.kumar_ok = true;
  const std::vector<double> times = time_grid(opts.t_grid);
  Rng rng(opts.seed);
  for (std::size_t level = 0; level < families.size(); ++level) {
    const MoserFamily& fam = families[level];
    UniformBoundRow row;
    row.level = static_cast<int>(level);
    row.dim = fam.dim();
    std::vector<Vec> points{fam.base()};
    if (opts.kumar_radius > 0.0) {
      const double rad = std::min(opts.kumar_radius, fam.radius());
      for (int s = 0; s < opts.kumar_samples; ++s) points.push_back(sample_in_ball(rng, fam.space(), fam.base(), rad));
    }
    for (double t : times) {
      const Conditioning c = flat_extremes(fam.space(), fam.at(t, fam.base()));
      row.forward_norm = std::max(row.forward_norm, c.sigma_max);
      row.inverse_norm = std::max(row.inverse_norm, c.sigma_min > 0.0 ? 1.0 / c.sigma_min : kInf);
      for (const Vec& p : points) {
        const Mat m = fam.at(t, p);
        const Conditioning cp = flat_extremes(fam.space(), m);
        if (!(cp.sigma_min > 0.0)) {
          row.kumar_norm = kInf;
          continue;
        }
        const Vec alpha = radial_primitive(fam.omega_bar(), p, fam.rule());
        row.kumar_norm = std::max(row.kumar_norm, fam.space().norm(m.partialPivLu().solve(alpha)));
      }
    }
    rep.forward_ok = rep.forward_ok && row.forward_norm <= k;
    rep.inverse_ok = rep.inverse_ok && row.inverse_norm <= k;
    rep.kumar_ok = rep.kumar_ok && row.kumar_norm <= k;
    rep.per_level.push_back(row);
  }
  return rep;
}

double fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeError("fit needs equally long inputs");
  if (x.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return -kInf;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

ProjectiveAssembly assemble_projective_darboux(const std::vector<MoserReport>& reports, const Tower& tower,
                                               double min_radius) {
  if (static_cast<int>(reports.size()) != tower.size())
    throw ShapeError("missing level report: got " + std::to_string(reports.size()) + " reports for " +
                     std::to_string(tower.size()) + " levels");
  ProjectiveAssembly out;
  const int n = tower.size();
  std::vector<double> radius(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) radius[j] = reports[j].chart_radius;

  out.limiting_radius_by_level.assign(static_cast<std::size_t>(n), kInf);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double sigma = smallest_row_singular_value(tower.composite(i, j).normalized());
      out.limiting_radius_by_level[i] = std::min(out.limiting_radius_by_level[i], radius[j] * sigma);
    }
  }
  std::vector<double> levels;
  for (int j = 0; j < n; ++j) {
    out.projected_radius.push_back(out.limiting_radius_by_level.empty()
                                       ? radius[j]
                                       : radius[j] * smallest_row_singular_value(tower.composite(0, j).normalized()));
    levels.push_back(j + 1.0);
  }
  out.decay_exponent = fit_power_law(levels, out.projected_radius);
  bool strictly_decreasing = n >= 2;
  for (int j = 1; j < n; ++j) strictly_decreasing = strictly_decreasing && out.projected_radius[j] < out.projected_radius[j - 1];
  out.decay_detected = n >= 2 && strictly_decreasing && out.decay_exponent <= -0.5;

  const double worst = *std::min_element(out.limiting_radius_by_level.begin(), out.limiting_radius_by_level.end());
  const bool radius_ok = worst >= min_radius;
  out.ok = radius_ok && !out.decay_detected;
  if (out.ok) {
    out.diagnosis = "(PLDC) holds: projected chart radii stay >= " + std::to_string(worst);
  } else if (out.decay_detected) {
    out.diagnosis = "(PLDC) fails: radii decay like c/n^" + std::to_string(-out.decay_exponent) +
                    " (fitted exponent " + std::to_string(out.decay_exponent) + ")";
  } else {
    out.diagnosis = "(PLDC) fails: limiting radius " + std::to_string(worst) + " below " + std::to_string(min_radius);
  }
  return out;
}

}  // namespace wsym
