#include "wsym/generators.hpp"

#include <cmath>
#include <string>

#include "wsym/errors.hpp"

namespace wsym {

std::vector<double> harmonic_spectrum(int d) {
  if (d < 1) throw PreconditionError("d must be >= 1");
  std::vector<double> s;
  for (int i = 1; i <= d; ++i) s.push_back(1.0 / i);
  return s;
}

std::vector<double> compact_spectrum(int d, double floor) {
  if (d < 1) throw PreconditionError("d must be >= 1");
  if (!(floor > 0.0) || floor > 1.0) throw PreconditionError("floor must lie in (0, 1]");
  if (d == 1) return {1.0};
  std::vector<double> s;
  for (int i = 0; i < d; ++i) s.push_back(std::pow(floor, static_cast<double>(i) / (d - 1)));
  return s;
}

MarsdenSpec default_marsden_spec(int d) {
  MarsdenSpec s;
  s.d = d;
  s.a = Vec::Unit(d, 0);
  s.s_eigs = harmonic_spectrum(d);
  return s;
}

void validate_marsden_spec(const MarsdenSpec& spec) {
  if (spec.d < 1) throw PreconditionError("d must be >= 1");
  if (spec.a.size() != spec.d) throw PreconditionError("a must have length d");
  if (spec.shift_k < 1) throw PreconditionError("shift_k must be a positive integer");
  if (static_cast<int>(spec.s_eigs.size()) != spec.d) throw PreconditionError("s_eigs must have length d");
  for (std::size_t i = 0; i < spec.s_eigs.size(); ++i) {
    // S = 0 is allowed so that pure scalar metrics can be built.
    if (!(spec.s_eigs[i] >= 0.0)) throw PreconditionError("s_eigs[" + std::to_string(i) + "] is negative");
    if (i > 0 && spec.s_eigs[i] > spec.s_eigs[i - 1])
      throw PreconditionError("s_eigs must be non-increasing (index " + std::to_string(i) + ")");
  }
}

namespace {

struct FactorLayout {
  int d;
  int n;
  int x(int k) const { return k * d; }
  int e(int k) const { return n * d + k * d; }
};

Mat factor_matrix(const Vec& a, const Vec& s, int n, const Vec& p) {
  const int d = static_cast<int>(a.size());
  const FactorLayout L{d, n};
  Mat m = Mat::Zero(2 * n * d, 2 * n * d);
  for (int k = 0; k < n; ++k) {
    const Vec c = p.segment(L.x(k), d) - a / (k + 1.0);
    const Vec e = p.segment(L.e(k), d);
    m.block(L.x(k), L.x(k), d, d) = e * c.transpose() - c * e.transpose();
    Mat half_a = 0.5 * Mat(s.asDiagonal());
    half_a.diagonal().array() += 0.5 * c.squaredNorm();
    m.block(L.x(k), L.e(k), d, d) = half_a;
    m.block(L.e(k), L.x(k), d, d) = -half_a;
  }
  return m;
}

Mat factor_derivative(const Vec& a, int n, const Vec& p, const Vec& h) {
  const int d = static_cast<int>(a.size());
  const FactorLayout L{d, n};
  Mat m = Mat::Zero(2 * n * d, 2 * n * d);
  for (int k = 0; k < n; ++k) {
    const Vec c = p.segment(L.x(k), d) - a / (k + 1.0);
    const Vec e = p.segment(L.e(k), d);
    const Vec hx = h.segment(L.x(k), d);
    const Vec he = h.segment(L.e(k), d);
    m.block(L.x(k), L.x(k), d, d) = he * c.transpose() + e * hx.transpose() - hx * e.transpose() - c * he.transpose();
    const double dc = c.dot(hx);
    m.block(L.x(k), L.e(k), d, d).diagonal().array() += dc;
    m.block(L.e(k), L.x(k), d, d).diagonal().array() -= dc;
  }
  return m;
}

Vec spectrum_vec(const std::vector<double>& s) { return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

}  // namespace

Mat counterexample_matrix(const Vec& a, const std::vector<double>& s_eigs, int factors, const Vec& point) {
  if (point.size() != 2 * factors * a.size()) throw ShapeError("point has the wrong dimension");
  return factor_matrix(a, spectrum_vec(s_eigs), factors, point);
}

FormField make_marsden_field(const MarsdenSpec& spec, double radius) {
  validate_marsden_spec(spec);
  const int d = spec.d;
  // A single factor with shift k is the first factor of a tower with a' = a/k·1.
  const Vec a = spec.a / static_cast<double>(spec.shift_k);
  const Vec s = spectrum_vec(spec.s_eigs);
  FormField f(
      ModelSpace(2 * d, "marsden" + std::to_string(2 * d)), Ball{Vec::Zero(2 * d), radius},
      [a, s](const Vec& p) { return factor_matrix(a, s, 1, p); },
      [a](const Vec& p, const Vec& h) { return factor_derivative(a, 1, p, h); });
  Vec probe = Vec::Zero(2 * d);
  probe.head(d) = a;
  if (probe.isZero(0.0)) return f;
  return f.with_probe_directions({probe});
}

SkewForm scaled_darboux_form(const std::vector<double>& s_eigs) {
  const int l = static_cast<int>(s_eigs.size());
  if (l < 1) throw PreconditionError("s_eigs must be non-empty");
  Mat m = Mat::Zero(2 * l, 2 * l);
  m.topRightCorner(l, l) = -Mat(spectrum_vec(s_eigs).asDiagonal());
  m.bottomLeftCorner(l, l) = Mat(spectrum_vec(s_eigs).asDiagonal());
  return SkewForm(ModelSpace(2 * l, "scaled-darboux" + std::to_string(2 * l)), std::move(m));
}

FormSequence make_product_tower(const std::vector<SkewForm>& factor_forms) {
  if (factor_forms.empty()) throw PreconditionError("product tower needs at least one factor");
  for (std::size_t k = 0; k < factor_forms.size(); ++k) {
    const Vec s = singular_values(factor_forms[k].matrix());
    if (s.size() == 0 || !(s(s.size() - 1) > kRankTol * s(0)))
      throw DegenerateFormError("factor " + std::to_string(k) + " is degenerate");
  }
  std::vector<ModelSpace> levels;
  std::vector<SkewForm> forms;
  std::vector<Mat> bondings;
  Mat gram(0, 0);
  Mat omega(0, 0);
  for (std::size_t k = 0; k < factor_forms.size(); ++k) {
    const Mat& g = factor_forms[k].space().gram();
    const Mat& w = factor_forms[k].matrix();
    const Eigen::Index old = gram.rows();
    const Eigen::Index n = old + g.rows();
    Mat ng = Mat::Zero(n, n);
    Mat nw = Mat::Zero(n, n);
    ng.topLeftCorner(old, old) = gram;
    ng.bottomRightCorner(g.rows(), g.rows()) = g;
    nw.topLeftCorner(old, old) = omega;
    nw.bottomRightCorner(w.rows(), w.rows()) = w;
    if (k > 0) {
      Mat b = Mat::Zero(old, n);
      b.leftCols(old) = Mat::Identity(old, old);
      bondings.push_back(std::move(b));
    }
    gram = std::move(ng);
    omega = std::move(nw);
    ModelSpace space(gram, "product" + std::to_string(k + 1));
    levels.push_back(space);
    forms.emplace_back(space, omega);
  }
  return FormSequence(Tower(std::move(levels), std::move(bondings)), std::move(forms));
}

CounterexampleTower make_counterexample_tower(int d, int levels, const Vec& a, const std::vector<double>& s_eigs,
                                              double radius) {
  if (levels < 1) throw PreconditionError("levels must be >= 1");
  MarsdenSpec spec;
  spec.d = d;
  spec.a = a;
  spec.s_eigs = s_eigs;
  validate_marsden_spec(spec);
  if (!(a.norm() > 0.0)) throw PreconditionError("a must be non-zero");

  CounterexampleTower out{Tower({ModelSpace(1)}, {}), {}, a, s_eigs, d};
  std::vector<ModelSpace> spaces;
  std::vector<Mat> bondings;
  const Vec s = spectrum_vec(s_eigs);
  for (int n = 1; n <= levels; ++n) {
    const int dim = 2 * n * d;
    ModelSpace space(dim, "counterexample-n" + std::to_string(n));
    spaces.push_back(space);
    if (n > 1) {
      // Drop factor n from both the x-block and the e-block.
      const int lo = 2 * (n - 1) * d;
      const int keep = (n - 1) * d;
      Mat b = Mat::Zero(lo, dim);
      b.block(0, 0, keep, keep) = Mat::Identity(keep, keep);
      b.block(keep, n * d, keep, keep) = Mat::Identity(keep, keep);
      bondings.push_back(std::move(b));
    }
    FormField f(
        space, Ball{Vec::Zero(dim), radius}, [a, s, n](const Vec& p) { return factor_matrix(a, s, n, p); },
        [a, n](const Vec& p, const Vec& h) { return factor_derivative(a, n, p, h); });
    std::vector<Vec> probes;
    for (int k = 0; k < n; ++k) {
      Vec p = Vec::Zero(dim);
      p.segment(k * d, d) = a / (k + 1.0);
      probes.push_back(std::move(p));
    }
    out.fields.push_back(f.with_probe_directions(std::move(probes)));
  }
  out.tower = Tower(std::move(spaces), std::move(bondings));
  return out;
}

FormSequence counterexample_forms_at(const CounterexampleTower& ct, const Vec& top_point) {
  const Thread th = Thread::from_top(ct.tower, top_point);
  std::vector<SkewForm> forms;
  for (int i = 0; i < ct.tower.size(); ++i) forms.emplace_back(ct.tower.level(i), ct.fields[i](th.component(i)));
  return FormSequence(ct.tower, std::move(forms));
}

FormSequence make_loop_tower(int m, int modes, const std::vector<int>& orders) {
  if (m < 1) throw PreconditionError("m must be >= 1");
  if (modes < 0) throw PreconditionError("modes must be >= 0");
  if (orders.empty()) throw PreconditionError("orders must be non-empty");
  for (std::size_t i = 1; i < orders.size(); ++i) {
    if (orders[i] <= orders[i - 1]) throw PreconditionError("orders must be increasing");
  }
  const int nb = 2 * modes + 1;
  const int block = 2 * m;
  const int dim = nb * block;
  // Basis 1, cos θ, sin θ, cos 2θ, … ; frequency of basis function b.
  const auto freq = [](int b) { return (b + 1) / 2; };
  Mat omega = Mat::Zero(dim, dim);
  const Mat j = darboux_constant_form(m).matrix();
  for (int b = 0; b < nb; ++b) omega.block(b * block, b * block, block, block) = j;

  std::vector<ModelSpace> levels;
  std::vector<SkewForm> forms;
  std::vector<Mat> bondings;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    Vec g(dim);
    for (int b = 0; b < nb; ++b) {
      const double w = std::pow(1.0 + static_cast<double>(freq(b)) * freq(b), orders[i]);
      g.segment(b * block, block).setConstant(w);
    }
    ModelSpace space(Mat(g.asDiagonal()), "H" + std::to_string(orders[i]));
    levels.push_back(space);
    forms.emplace_back(space, omega);
    if (i > 0) bondings.push_back(Mat::Identity(dim, dim));
  }
  return FormSequence(Tower(std::move(levels), std::move(bondings)), std::move(forms));
}

FormField make_perturbed_darboux_field(int l_dim, double eps, std::uint64_t seed, double radius) {
  const SkewForm base = darboux_constant_form(l_dim);
  const int n = base.dim();
  Rng rng(seed);
  // β_j(x) = ½ xᵀ Q_j x with symmetric Q_j, so (Jβ)_{ji} = (Q_j x)_i.
  std::vector<Mat> q;
  for (int j = 0; j < n; ++j) {
    const Mat r = random_gaussian(rng, n, n);
    q.push_back(0.5 * (r + r.transpose()));
  }
  const Mat w0 = base.matrix();
  const auto jac = [q, n](const Vec& x) {
    Mat jb(n, n);
    for (int j = 0; j < n; ++j) jb.row(j) = (q[j] * x).transpose();
    return jb;
  };
  return FormField(
      base.space(), Ball{Vec::Zero(n), radius},
      [w0, jac, eps](const Vec& x) {
        const Mat jb = jac(x);
        return Mat(w0 + eps * (jb.transpose() - jb));
      },
      [jac, eps](const Vec&, const Vec& h) {
        const Mat jb = jac(h);
        return Mat(eps * (jb.transpose() - jb));
      });
}

}  // namespace wsym
