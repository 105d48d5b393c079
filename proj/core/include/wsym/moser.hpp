#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wsym/form_field.hpp"
#include "wsym/quadrature.hpp"
#include "wsym/tower.hpp"

namespace wsym {

struct MoserSettings {
  int quad_nodes = 16;
  /// Flat invertibility threshold, relative to sigma_max.
  double sing_tol = 1e-8;
  double cond_cap = 1e6;
};

/// The affine family ω^t = ω⁰ + t·ω̄ around a base point x₀, where ω⁰ is the
/// constant form ω_{x₀} and ω̄ = ω − ω⁰. ω̄ lives on the largest ball around x₀
/// inside the original field's region, so the radial primitive is always
/// taken about x₀.
class MoserFamily {
 public:
  MoserFamily(const FormField& omega, const Vec& base, MoserSettings settings = {});

  const Vec& base() const { return base_; }
  const SkewForm& omega0() const { return omega0_; }
  const FormField& omega() const { return omega_; }
  const FormField& omega_bar() const { return omega_bar_; }
  const MoserSettings& settings() const { return settings_; }
  const QuadratureRule& rule() const { return rule_; }
  const ModelSpace& space() const { return omega0_.space(); }
  int dim() const { return omega0_.dim(); }
  double radius() const { return omega_bar_.region().radius; }
  bool trivial() const { return omega_bar_.is_identically_zero(); }

  /// Ω^t at x.
  Mat at(double t, const Vec& x) const;
  /// ω^t as a field on the family's ball.
  FormField interpolant(double t) const;

 private:
  Vec base_;
  SkewForm omega0_;
  FormField omega_;
  FormField omega_bar_;
  MoserSettings settings_;
  QuadratureRule rule_;
};

struct ClosednessReport {
  double residual = 0.0;
  int evaluated = 0;
  int skipped = 0;
};

/// max |dω(X,Y,Z)| over sampled points of the region and random unit triples,
/// dω(X,Y,Z) = D_Xω(Y,Z) + D_Yω(Z,X) + D_Zω(X,Y).
ClosednessReport exterior_derivative_residual(const FormField& field, int samples, std::uint64_t seed,
                                              int triples_per_point = 4);

/// α_x = ∫₀¹ s·ω̄_{c+s(x−c)}(x−c, ·) ds about the region center c, as a
/// covector in the standard pairing. Throws RegionError if x is outside the ball.
Vec radial_primitive(const FormField& field_bar, const Vec& x, int quad_nodes = 16);
Vec radial_primitive(const FormField& field_bar, const Vec& x, const QuadratureRule& rule01);

/// X^t_x solving ω^t_x(X, ·) = −α_x, i.e. Ω^t_x·X = α_x. Throws ValidityError
/// when the flat is numerically singular.
Vec moser_vector_field(const MoserFamily& family, double t, const Vec& x);

/// Extreme gram-norm singular values of the flat of a skew matrix on a space.
Conditioning flat_extremes(const ModelSpace& space, const Mat& omega);

struct ValidityOptions {
  int t_grid = 5;
  int ray_count = 16;
  std::uint64_t seed = 0;
  /// Coarse samples per ray before local refinement.
  int coarse_steps = 128;
  /// Overrides the family's cond_cap when positive.
  double cond_cap = 0.0;
  std::vector<Vec> extra_rays;
};

/// Largest r such that every sampled ray from x₀ stays, for ‖x − x₀‖ ≤ r and
/// all grid times, inside {σ_min > sing_tol·σ_max, κ ≤ cond_cap}. Returns 0 when
/// x₀ itself fails and the family radius when no ray fails.
double validity_radius(const MoserFamily& family, const ValidityOptions& opts = {});

/// The time-one Moser map F = Fl₁ with (Fl₁)*ω = ω⁰, plus its inverse.
class DarbouxChart {
 public:
  DarbouxChart(MoserFamily family, double dt);

  /// Fl_t(x). With check_validity, throws ValidityError/RegionError when the
  /// trajectory leaves the validity region.
  Vec flow(const Vec& x, double t, bool check_validity = false) const;
  Vec apply(const Vec& x, bool check_validity = false) const { return flow(x, 1.0, check_validity); }
  /// F⁻¹ by integrating the same field backwards from t = 1 to t = 0.
  Vec inverse(const Vec& y, bool check_validity = false) const;

  const MoserFamily& family() const { return family_; }
  double dt() const { return dt_; }
  int steps() const;

 private:
  MoserFamily family_;
  double dt_;
};

struct FlowOptions {
  double dt = 1e-3;
  /// Random seed directions; each contributes points at `shells` radii.
  int seed_rays = 6;
  int shells = 3;
  std::uint64_t seed = 0;
  int verify_samples = 6;
  double verify_tol = 1e-5;
  double fd_step = 1e-3;
  bool halving_telemetry = true;
  bool record_trajectories = false;
  /// Reject the flow if lipschitz·dt exceeds this.
  double stability_bound = 0.5;
};

struct ChartSample {
  Vec input;
  Vec output;
  bool survived = false;
};

struct TrajectoryPoint {
  int seed_index = 0;
  double t = 0.0;
  Vec x;
};

struct MoserReport {
  Vec base;
  std::vector<ChartSample> samples;
  std::shared_ptr<const DarbouxChart> chart;
  double start_radius = 0.0;
  /// Radius of the largest seed ball whose trajectories all survived.
  double chart_radius = 0.0;
  double validity_radius = 0.0;
  double pullback_residual = 0.0;
  int verified_samples = 0;
  int steps = 0;
  double step_size = 0.0;
  double lipschitz = 0.0;
  /// max ‖F_dt(x) − F_{dt/2}(x)‖ over surviving seeds.
  double halving_delta = 0.0;
  /// max_t ‖Fl_t(x₀) − x₀‖.
  double base_drift = 0.0;
  bool identity_shortcut = false;
  std::vector<TrajectoryPoint> trajectories;
};

/// Integrates the Moser field for seeds in B(x₀, r_start) and reports the chart.
/// Throws NoChartError if the base trajectory fails or the stability guard trips.
MoserReport moser_flow(const MoserFamily& family, double r_start, const FlowOptions& opts = {});

/// A report for a level whose chart domain is taken to be its validity ball,
/// without integrating.
MoserReport validity_only_report(const MoserFamily& family, double validity_radius);

struct ChartVerification {
  double residual = 0.0;
  bool ok = false;
  int evaluated = 0;
  int skipped = 0;
};

/// max over samples of max_{ij} |(DFᵀ·Ω(F(x))·DF − Ω⁰)_{ij}|, with DF from
/// fourth-order central differences of F.
ChartVerification verify_darboux_chart(const std::function<Vec(const Vec&)>& chart, const FormField& omega,
                                       const SkewForm& omega0, const std::vector<Vec>& samples, double tol,
                                       double fd_step = 1e-3);

struct UniformBoundRow {
  int level = 0;
  int dim = 0;
  double forward_norm = 0.0;
  double inverse_norm = 0.0;
  double kumar_norm = 0.0;
};

struct UniformBoundReport {
  bool forward_ok = false;
  bool inverse_ok = false;
  bool kumar_ok = false;
  std::vector<UniformBoundRow> per_level;
};

struct UniformBoundOptions {
  int t_grid = 5;
  /// Kumar's quantity is evaluated at the base point and, when positive, at
  /// kumar_samples points within this radius of it.
  double kumar_radius = 0.0;
  int kumar_samples = 0;
  std::uint64_t seed = 0;
};

/// Per-level forward norm ‖(ω_i^t)♭‖, inverse norm ‖((ω_i^t)♭)⁻¹‖ and
/// Kumar norm ‖((ω_i^t)♭)⁻¹α_i‖ at the base points, each compared with K.
UniformBoundReport uniform_bound_check(const std::vector<MoserFamily>& per_level_families, double k,
                                       const UniformBoundOptions& opts = {});

struct ProjectiveAssembly {
  bool ok = false;
  /// inf over j ≥ i of the inscribed radius of δ_i^j(chart ball at level j).
  std::vector<double> limiting_radius_by_level;
  /// Chart radius of level j seen at level 0.
  std::vector<double> projected_radius;
  double decay_exponent = 0.0;
  bool decay_detected = false;
  std::string diagnosis;
};

ProjectiveAssembly assemble_projective_darboux(const std::vector<MoserReport>& per_level_reports,
                                               const Tower& tower, double min_radius);

/// Least-squares slope of log y against log x.
double fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wsym
