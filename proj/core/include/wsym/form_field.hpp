#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "wsym/symplectic.hpp"

namespace wsym {

/// Closed ball in the gram norm of a model space.
struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Smooth point-dependent skew form x ↦ Ω(x) on a ball of a model space.
///
/// When no analytic derivative is supplied, DΩ(x)[h] is taken by central
/// differences with step fd_h.
class FormField {
 public:
  using Eval = std::function<Mat(const Vec&)>;
  using Derivative = std::function<Mat(const Vec&, const Vec&)>;

  FormField(ModelSpace space, Ball region, Eval eval, Derivative derivative = {}, double fd_h = 1e-5);

  static FormField constant(const SkewForm& form, Ball region);

  const ModelSpace& space() const { return space_; }
  const Ball& region() const { return region_; }
  int dim() const { return space_.dim(); }

  Mat operator()(const Vec& x) const { return eval_(x); }
  Mat derivative(const Vec& x, const Vec& h) const;
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  double fd_step() const { return fd_h_; }

  bool contains(const Vec& x, double slack = 0.0) const;

  /// Set by constructors that know the field vanishes identically.
  bool is_identically_zero() const { return zero_; }

  /// Directions along which the field is known to degenerate; searches that
  /// sample rays include them alongside random ones.
  const std::vector<Vec>& probe_directions() const { return probes_; }
  FormField with_probe_directions(std::vector<Vec> probes) const;

  /// The same field restricted to a smaller ball.
  FormField restricted_to(Ball region) const;

  /// x ↦ Ω(x) − c. The result is flagged zero when this field is constant and equal to c.
  FormField minus_constant(const Mat& c) const;

 private:
  ModelSpace space_;
  Ball region_;
  Eval eval_;
  Derivative derivative_;
  double fd_h_;
  bool zero_ = false;
  bool constant_ = false;
  std::vector<Vec> probes_;
};

}  // namespace wsym
