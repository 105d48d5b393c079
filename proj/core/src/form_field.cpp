#include "wsym/form_field.hpp"

#include "wsym/errors.hpp"

namespace wsym {

FormField::FormField(ModelSpace space, Ball region, Eval eval, Derivative derivative, double fd_h)
    : space_(std::move(space)),
      region_(std::move(region)),
      eval_(std::move(eval)),
      derivative_(std::move(derivative)),
      fd_h_(fd_h) {
  if (region_.center.size() != space_.dim()) throw ShapeError("region center has the wrong dimension");
  if (!(region_.radius > 0.0)) throw ShapeError("region radius must be positive");
  if (!eval_) throw ShapeError("form field needs an evaluator");
  if (!(fd_h_ > 0.0)) throw ShapeError("fd_h must be positive");
}

FormField FormField::constant(const SkewForm& form, Ball region) {
  const Mat m = form.matrix();
  const int n = form.dim();
  FormField f(
      form.space(), std::move(region), [m](const Vec&) { return m; },
      [n](const Vec&, const Vec&) { return Mat(Mat::Zero(n, n)); });
  f.constant_ = true;
  f.zero_ = m.isZero(0.0);
  return f;
}

Mat FormField::derivative(const Vec& x, const Vec& h) const {
  if (derivative_) return derivative_(x, h);
  return (eval_(x + fd_h_ * h) - eval_(x - fd_h_ * h)) / (2.0 * fd_h_);
}

bool FormField::contains(const Vec& x, double slack) const {
  return space_.norm(x - region_.center) <= region_.radius * (1.0 + slack);
}

FormField FormField::with_probe_directions(std::vector<Vec> probes) const {
  for (const Vec& p : probes) {
    if (p.size() != dim()) throw ShapeError("probe direction has the wrong dimension");
  }
  FormField f = *this;
  f.probes_ = std::move(probes);
  return f;
}

FormField FormField::restricted_to(Ball region) const {
  if (region.center.size() != dim()) throw ShapeError("region center has the wrong dimension");
  FormField f = *this;
  f.region_ = std::move(region);
  return f;
}

FormField FormField::minus_constant(const Mat& c) const {
  if (c.rows() != dim() || c.cols() != dim()) throw ShapeError("constant has the wrong shape");
  FormField f = *this;
  auto eval = eval_;
  f.eval_ = [eval, c](const Vec& x) { return Mat(eval(x) - c); };
  if (constant_) f.zero_ = (eval_(region_.center) - c).isZero(0.0);
  return f;
}

}  // namespace wsym
