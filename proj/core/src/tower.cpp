#include "wsym/tower.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsym/errors.hpp"

namespace wsym {

namespace {

std::string idx(int i) { return std::to_string(i); }

}  // namespace

Tower::Tower(std::vector<ModelSpace> levels, std::vector<Mat> bondings, TowerLimits limits) {
  if (levels.empty()) throw ShapeError("tower needs at least one level");
  const int n_levels = static_cast<int>(levels.size());
  if (n_levels - 1 > limits.max_depth)
    throw ShapeError("tower depth " + idx(n_levels - 1) + " exceeds limit " + idx(limits.max_depth));
  if (static_cast<int>(bondings.size()) != n_levels - 1)
    throw ShapeError("tower with " + idx(n_levels) + " levels needs " + idx(n_levels - 1) + " bondings, got " +
                     idx(static_cast<int>(bondings.size())));
  for (int i = 0; i < n_levels; ++i) {
    if (levels[i].dim() > limits.max_dim)
      throw ShapeError("level " + idx(i) + " dim " + idx(levels[i].dim()) + " exceeds limit " +
                       idx(limits.max_dim));
  }

  auto d = std::make_shared<Data>();
  for (int i = 0; i + 1 < n_levels; ++i) {
    const Mat& b = bondings[i];
    if (b.rows() != levels[i].dim() || b.cols() != levels[i + 1].dim())
      throw ShapeError("bonding " + idx(i) + " (level " + idx(i + 1) + " -> level " + idx(i) + ") is " +
                       idx(static_cast<int>(b.rows())) + "x" + idx(static_cast<int>(b.cols())) + ", expected " +
                       idx(levels[i].dim()) + "x" + idx(levels[i + 1].dim()));
    d->bondings.emplace_back(levels[i + 1], levels[i], b);
  }
  d->composites.resize(n_levels);
  for (int j = 0; j < n_levels; ++j) {
    auto& row = d->composites[j];
    row.reserve(j + 1);
    for (int i = 0; i <= j; ++i) row.push_back(LinearMap::identity(levels[j]));
    for (int i = j - 1; i >= 0; --i) {
      row[i] = compose(d->bondings[i], row[i + 1]);
    }
  }
  d->levels = std::move(levels);
  data_ = std::move(d);
}

const ModelSpace& Tower::level(int i) const {
  if (i < 0 || i > depth()) throw ShapeError("level index " + idx(i) + " out of range");
  return data_->levels[i];
}

const LinearMap& Tower::bonding(int i) const {
  if (i < 0 || i >= depth()) throw ShapeError("bonding index " + idx(i) + " out of range");
  return data_->bondings[i];
}

const LinearMap& Tower::composite(int i, int j) const {
  if (i < 0 || j > depth() || i > j)
    throw ShapeError("composite (" + idx(i) + ", " + idx(j) + ") out of range");
  return data_->composites[j][i];
}

Tower build_tower(std::vector<ModelSpace> levels, std::vector<Mat> consecutive_bondings, TowerLimits limits) {
  return Tower(std::move(levels), std::move(consecutive_bondings), limits);
}

Thread::Thread(Tower tower, std::vector<Vec> components)
    : tower_(std::move(tower)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != tower_.size())
    throw ShapeError("thread has " + idx(static_cast<int>(components_.size())) + " components, tower has " +
                     idx(tower_.size()) + " levels");
  for (int i = 0; i < tower_.size(); ++i) {
    if (components_[i].size() != tower_.level(i).dim())
      throw ShapeError("thread component " + idx(i) + " has wrong dimension");
  }
  for (int i = 0; i < tower_.depth(); ++i) {
    const Vec pushed = tower_.bonding(i)(components_[i + 1]);
    const double scale = std::max({1.0, pushed.norm(), components_[i].norm()});
    if ((pushed - components_[i]).norm() > 1e-10 * scale)
      throw PreconditionError("thread components " + idx(i) + " and " + idx(i + 1) + " are inconsistent");
  }
}

Thread Thread::from_top(const Tower& tower, const Vec& top) {
  std::vector<Vec> comps(static_cast<std::size_t>(tower.size()));
  for (int i = 0; i < tower.size(); ++i) comps[i] = tower.composite(i, tower.depth())(top);
  return Thread(tower, std::move(comps));
}

double Thread::seminorm(int n) const {
  double m = 0.0;
  for (int i = 0; i <= n && i < tower_.size(); ++i) m = std::max(m, tower_.level(i).norm(components_[i]));
  return m;
}

FormSequence::FormSequence(Tower tower, std::vector<SkewForm> forms)
    : tower_(std::move(tower)), forms_(std::move(forms)) {
  if (static_cast<int>(forms_.size()) != tower_.size())
    throw ShapeError("form sequence has " + idx(static_cast<int>(forms_.size())) + " forms, tower has " +
                     idx(tower_.size()) + " levels");
  for (int i = 0; i < tower_.size(); ++i) {
    if (forms_[i].dim() != tower_.level(i).dim())
      throw ShapeError("form " + idx(i) + " has dim " + idx(forms_[i].dim()) + ", level has dim " +
                       idx(tower_.level(i).dim()));
  }
}

TowerClassification classify_tower(const Tower& t, double rank_tol) {
  TowerClassification c;
  c.reduced = true;
  for (int i = 0; i < t.depth(); ++i) {
    const LinearMap& b = t.bonding(i);
    if (numerical_rank(b.matrix(), rank_tol) != b.target().dim()) {
      c.reduced = false;
      break;
    }
  }
  c.surjective = c.reduced;
  c.split_kernels = true;
  return c;
}

CompatibilityReport check_compatible_sequence(const FormSequence& fs, double tol, bool check_composites,
                                              double rank_tol) {
  const Tower& t = fs.tower();
  CompatibilityReport r;
  r.ok = true;
  for (int i = 0; i < t.depth(); ++i) {
    r.levels.push_back(check_weak_isometry(t.bonding(i), fs.form(i + 1), fs.form(i), tol, rank_tol));
    if (!r.levels.back().ok && r.ok) {
      r.ok = false;
      r.first_failing_level = i;
    }
  }
  if (r.ok && check_composites) {
    for (int j = 0; j <= t.depth(); ++j) {
      for (int i = 0; i + 1 < j; ++i) {
        if (!check_weak_isometry(t.composite(i, j), fs.form(j), fs.form(i), tol, rank_tol).ok)
          r.failing_composites.emplace_back(i, j);
      }
    }
  }
  return r;
}

LimitFormValue limit_form_eval(const FormSequence& fs, const Thread& u, const Thread& v,
                               const StabilizationOptions& opts) {
  if (u.tower().size() != fs.tower().size() || v.tower().size() != fs.tower().size())
    throw ShapeError("threads do not belong to the form sequence's tower");
  if (!check_compatible_sequence(fs, opts.compat_tol, false).ok)
    throw PreconditionError("form sequence is not compatible");
  LimitFormValue out;
  const int n = fs.size();
  out.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values.push_back(fs.form(i)(u.component(i), v.component(i)));
  out.final = out.values.back();
  out.stabilized = true;
  for (int j = std::max(0, opts.stab_index); j < n; ++j) {
    if (std::abs(out.values[j] - out.final) > opts.stab_tol) {
      out.stabilized = false;
      break;
    }
  }
  return out;
}

namespace {

struct Step {
  Mat lift;  // ℓ′⁻¹ : E_l → F_{l+1}, as a matrix E_l → E_{l+1}
  Mat kernel;
};

// Splitting data of bonding(l) : E_{l+1} → E_l.
Step split_bonding(const FormSequence& fs, int l, double rank_tol) {
  const LinearMap& b = fs.tower().bonding(l);
  const Subspace ker = kernel(b, rank_tol);
  const Subspace ker_perp = symplectic_orthogonal(fs.form(l + 1), ker, rank_tol);
  if (subspace_intersection(ker.basis(), ker_perp.basis(), rank_tol).cols() != 0)
    throw PreconditionError("ker ∩ ker^⊥ ≠ {0} at level " + idx(l + 1));
  const Mat& f = ker_perp.basis();
  const Mat m = b.matrix() * f;
  if (m.rows() != m.cols() || numerical_rank(m, rank_tol) != m.rows())
    throw PreconditionError("bonding " + idx(l) + " restricted to (ker)^⊥ is not invertible onto level " +
                            idx(l));
  return {f * m.partialPivLu().solve(Mat::Identity(m.rows(), m.rows())), ker.basis()};
}

}  // namespace

BlockDecomposition block_decompose(const FormSequence& fs, int base_i, int level_j, double tol,
                                   double rank_tol) {
  const Tower& t = fs.tower();
  if (base_i < 0 || base_i > level_j || level_j > t.depth())
    throw PreconditionError("need 0 <= base_i <= level_j <= depth");
  const CompatibilityReport comp = check_compatible_sequence(fs, tol, false, rank_tol);
  if (!comp.ok) {
    // Only levels the decomposition touches matter.
    for (int l = base_i; l < level_j; ++l) {
      if (!comp.levels[l].ok)
        throw PreconditionError("form sequence is not compatible at bonding " + idx(l) + " (level " + idx(l + 1) +
                                " -> " + idx(l) + ")");
    }
  }

  std::vector<Mat> blocks{Mat::Identity(t.level(base_i).dim(), t.level(base_i).dim())};
  for (int l = base_i; l < level_j; ++l) {
    const Step s = split_bonding(fs, l, rank_tol);
    std::vector<Mat> next;
    next.reserve(blocks.size() + 1);
    for (const Mat& w : blocks) next.push_back(s.lift * w);
    next.push_back(s.kernel);
    blocks = std::move(next);
  }

  BlockDecomposition bd;
  bd.base = base_i;
  bd.level = level_j;
  const int n = t.level(level_j).dim();
  Eigen::Index total = 0;
  for (const Mat& b : blocks) total += b.cols();
  Mat stacked(n, total);
  Eigen::Index col = 0;
  for (const Mat& b : blocks) {
    stacked.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  // Empty kernel blocks are kept so indices line up with levels.
  for (Mat& b : blocks) bd.blocks.emplace_back(t.level(level_j), std::move(b), rank_tol);
  const int r = numerical_rank(stacked, rank_tol);
  bd.direct_sum_defect = static_cast<double>(std::abs(n - r) + std::abs(static_cast<int>(total) - r));
  const Vec sv = singular_values(stacked);
  bd.reconstruction_condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  return bd;
}

DecompositionAudit audit_block_decomposition(const FormSequence& fs, const BlockDecomposition& bd, double tol,
                                             double rank_tol) {
  const Tower& t = fs.tower();
  const int i = bd.base;
  const int j = bd.level;
  DecompositionAudit a;
  const auto span_of = [&](int first, int last) {
    Mat m(t.level(j).dim(), 0);
    for (int b = first; b <= last; ++b) {
      Mat next(m.rows(), m.cols() + bd.blocks[b].dim());
      next << m, bd.blocks[b].basis();
      m = std::move(next);
    }
    return m;
  };
  const int n_blocks = static_cast<int>(bd.blocks.size());
  for (int l = i; l < j; ++l) {
    const LinearMap& d = t.composite(l, j);
    // kernel identity: ker δ_l^j = blocks (l+1−i) … end
    const Mat ker = null_space(d.matrix(), rank_tol);
    const Mat tail = span_of(l + 1 - i, n_blocks - 1);
    a.kernel_defect = std::max({a.kernel_defect, containment_defect(ker, tail, rank_tol),
                                containment_defect(tail, ker, rank_tol)});
    if (ker.cols() != tail.cols()) a.kernel_defect = std::max(a.kernel_defect, 1.0);

    // restriction to blocks 0 … (l−i) is injective and onto E_l
    const Mat head = span_of(0, l - i);
    const Mat image = d.matrix() * head;
    const int rank = numerical_rank(image, rank_tol);
    if (rank != head.cols()) a.restriction_injective = false;
    if (rank != t.level(l).dim()) a.restriction_onto = false;

    // images of individual blocks
    const BlockDecomposition lower = block_decompose(fs, i, l, tol, rank_tol);
    for (int b = 0; b < n_blocks; ++b) {
      const Mat img = d.matrix() * bd.blocks[b].basis();
      const int h = i + b;
      if (h <= l) {
        const Mat& target = lower.blocks[b].basis();
        a.image_defect = std::max({a.image_defect, containment_defect(target, img, rank_tol),
                                   containment_defect(img, target, rank_tol)});
      } else {
        const double scale = std::max(1.0, bd.blocks[b].basis().norm());
        a.image_defect = std::max(a.image_defect, img.size() == 0 ? 0.0 : img.norm() / scale);
      }
    }
  }
  return a;
}

SubmersionReport check_symplectic_submersion(const SkewForm& form_top, const LinearMap& map, double rank_tol) {
  if (form_top.dim() != map.source().dim()) throw ShapeError("form does not live on the map's source");
  if (numerical_rank(map.matrix(), rank_tol) != map.target().dim())
    throw NotSubmersionError("map is not surjective");
  const Subspace ker = kernel(map, rank_tol);
  const Subspace ker_perp = symplectic_orthogonal(form_top, ker, rank_tol);
  SubmersionReport r;
  const int n = form_top.dim();
  const bool transverse = subspace_intersection(ker.basis(), ker_perp.basis(), rank_tol).cols() == 0;
  r.split_ok = transverse && subspace_sum(ker.basis(), ker_perp.basis(), rank_tol).cols() == n;
  if (ker.dim() == 0) {
    r.vertical_nondegenerate = true;
  } else {
    const SkewForm vertical = restrict_form(form_top, ker);
    const Vec s = singular_values(vertical.matrix());
    const double scale = std::max(s(0), singular_values(form_top.matrix())(0));
    r.vertical_nondegenerate = scale > 0.0 && s(s.size() - 1) > rank_tol * scale;
  }
  r.ok = r.split_ok && r.vertical_nondegenerate;
  return r;
}

SkewForm induce_level_form(const SkewForm& form_top, const LinearMap& map, double rank_tol) {
  const SubmersionReport rep = check_symplectic_submersion(form_top, map, rank_tol);
  if (!rep.ok) throw PreconditionError("map is not a symplectic submersion for this form");
  const Subspace ker = kernel(map, rank_tol);
  const Mat f = symplectic_orthogonal(form_top, ker, rank_tol).basis();
  const Mat m = map.matrix() * f;
  const Mat lift = f * m.partialPivLu().solve(Mat::Identity(m.rows(), m.rows()));
  Mat omega = lift.transpose() * form_top.matrix() * lift;
  omega = 0.5 * (omega - omega.transpose()).eval();
  return SkewForm(map.target(), std::move(omega));
}

}  // namespace wsym
