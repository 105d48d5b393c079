#include "wsym/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "wsym/errors.hpp"

namespace wsym {

namespace {

constexpr double kSymmetryTol = 1e-12;

std::string dims(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

double spectral_norm(const Mat& a) {
  const Vec s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

}  // namespace

ModelSpace::ModelSpace(int dim, std::string label) {
  if (dim < 1) throw ShapeError("model space dimension must be >= 1, got " + std::to_string(dim));
  auto d = std::make_shared<Data>();
  d->gram = Mat::Identity(dim, dim);
  d->frame = d->gram;
  d->frame_inv = d->gram;
  d->label = std::move(label);
  d->identity = true;
  data_ = std::move(d);
}

ModelSpace::ModelSpace(Mat gram, std::string label) {
  if (gram.rows() < 1 || gram.rows() != gram.cols())
    throw ShapeError("gram must be a non-empty square matrix, got " + dims(gram.rows(), gram.cols()));
  const double scale = gram.norm();
  if ((gram - gram.transpose()).norm() > kSymmetryTol * scale)
    throw ShapeError("gram is not symmetric");
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) throw ShapeError("gram is not positive definite");
  const Mat l = llt.matrixL();
  if (l.diagonal().minCoeff() <= 0.0) throw ShapeError("gram is not positive definite");

  auto d = std::make_shared<Data>();
  const auto n = gram.rows();
  d->identity = gram == Mat::Identity(n, n);
  d->frame_inv = l.transpose();
  d->frame = l.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
  d->gram = std::move(gram);
  d->label = std::move(label);
  data_ = std::move(d);
}

double ModelSpace::norm(const Vec& u) const {
  if (has_identity_gram()) return u.norm();
  return (frame_inverse() * u).norm();
}

double ModelSpace::dual_norm(const Vec& c) const {
  if (has_identity_gram()) return c.norm();
  return (orthonormal_frame().transpose() * c).norm();
}

SkewForm::SkewForm(ModelSpace space, Mat matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
    throw ShapeError("form matrix is " + dims(matrix_.rows(), matrix_.cols()) + " but space has dim " +
                     std::to_string(space_.dim()));
  const double n = matrix_.norm();
  if ((matrix_ + matrix_.transpose()).norm() > kSymmetryTol * n)
    throw ShapeError("form matrix is not skew-symmetric (defect " + std::to_string(skew_defect(matrix_)) + ")");
}

Subspace::Subspace(ModelSpace ambient, Mat basis, double rank_tol)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (basis_.rows() != ambient_.dim())
    throw ShapeError("subspace basis has " + std::to_string(basis_.rows()) + " rows, ambient dim is " +
                     std::to_string(ambient_.dim()));
  if (basis_.cols() > 0) {
    const Vec s = singular_values(basis_);
    if (s(s.size() - 1) <= rank_tol * s(0) || basis_.cols() > basis_.rows())
      throw ShapeError("subspace basis columns are not linearly independent");
  }
}

Subspace Subspace::whole(const ModelSpace& ambient) {
  return Subspace(ambient, Mat::Identity(ambient.dim(), ambient.dim()));
}

Subspace Subspace::zero(const ModelSpace& ambient) { return Subspace(ambient, Mat(ambient.dim(), 0)); }

bool operator==(const Subspace& a, const Subspace& b) {
  return a.ambient().dim() == b.ambient().dim() && a.dim() == b.dim() &&
         subspaces_equal(a.basis(), b.basis());
}

LinearMap::LinearMap(ModelSpace source, ModelSpace target, Mat matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
    throw ShapeError("map matrix is " + dims(matrix_.rows(), matrix_.cols()) + ", expected " +
                     dims(target_.dim(), source_.dim()));
}

LinearMap LinearMap::identity(const ModelSpace& space) {
  return LinearMap(space, space, Mat::Identity(space.dim(), space.dim()));
}

Mat LinearMap::normalized() const {
  return target_.frame_inverse() * matrix_ * source_.orthonormal_frame();
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  if (outer.source().dim() != inner.target().dim())
    throw ShapeError("cannot compose: inner target dim " + std::to_string(inner.target().dim()) +
                     " != outer source dim " + std::to_string(outer.source().dim()));
  return LinearMap(inner.source(), outer.target(), outer.matrix() * inner.matrix());
}

LinearMap flat_operator(const SkewForm& form) {
  return LinearMap(form.space(), form.space(), form.matrix().transpose());
}

NondegeneracyReport check_weak_nondegenerate(const SkewForm& form, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
  const Vec s = singular_values(form.matrix());
  const double smin = s(s.size() - 1);
  return {smin > tol, smin};
}

SkewForm darboux_constant_form(int l_dim) {
  if (l_dim < 1) throw ShapeError("l_dim must be >= 1");
  const int n = 2 * l_dim;
  Mat m = Mat::Zero(n, n);
  m.topRightCorner(l_dim, l_dim) = -Mat::Identity(l_dim, l_dim);
  m.bottomLeftCorner(l_dim, l_dim) = Mat::Identity(l_dim, l_dim);
  return SkewForm(ModelSpace(n, "darboux" + std::to_string(n)), std::move(m));
}

double omega_dual_norm(const SkewForm& form, const Vec& u) {
  if (u.size() != form.dim()) throw ShapeError("vector size does not match form dimension");
  return form.space().dual_norm(form.matrix().transpose() * u);
}

Vec flat_singular_values(const SkewForm& form) {
  const ModelSpace& sp = form.space();
  if (sp.has_identity_gram()) return singular_values(form.matrix());
  const Mat& w = sp.orthonormal_frame();
  return singular_values(w.transpose() * form.matrix().transpose() * w);
}

Conditioning weakness_conditioning(const SkewForm& form, double rank_tol) {
  const Vec s = flat_singular_values(form);
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smax == 0.0 || smin <= rank_tol * smax) throw DegenerateFormError();
  return {smax / smin, smin, smax};
}

Subspace symplectic_orthogonal(const SkewForm& form, const Subspace& k, double rank_tol) {
  if (k.ambient().dim() != form.dim())
    throw ShapeError("subspace ambient dim " + std::to_string(k.ambient().dim()) + " != form dim " +
                     std::to_string(form.dim()));
  const Mat constraint = k.basis().transpose() * form.matrix();
  return Subspace(form.space(), null_space(constraint, rank_tol));
}

SkewForm restrict_form(const SkewForm& form, const Subspace& k) {
  if (k.ambient().dim() != form.dim()) throw ShapeError("subspace does not live in the form's space");
  if (k.dim() == 0) throw ShapeError("cannot restrict a form to the zero subspace");
  const Mat& b = k.basis();
  Mat m = b.transpose() * form.matrix() * b;
  // Congruence rounding can break exact skewness; re-skew.
  m = 0.5 * (m - m.transpose()).eval();
  return SkewForm(ModelSpace(Mat(b.transpose() * form.space().gram() * b)), std::move(m));
}

SkewForm pullback_form(const LinearMap& map, const SkewForm& form) {
  if (map.target().dim() != form.dim())
    throw ShapeError("form lives on a space of dim " + std::to_string(form.dim()) + ", map target has dim " +
                     std::to_string(map.target().dim()));
  const Mat& l = map.matrix();
  Mat m = l.transpose() * form.matrix() * l;
  m = 0.5 * (m - m.transpose()).eval();
  return SkewForm(map.source(), std::move(m));
}

Subspace kernel(const LinearMap& map, double rank_tol) {
  return Subspace(map.source(), null_space(map.matrix(), rank_tol));
}

Subspace kernel(const SkewForm& form, double rank_tol) {
  return Subspace(form.space(), null_space(form.matrix(), rank_tol));
}

WeakIsometryReport check_weak_isometry(const LinearMap& map, const SkewForm& form_src,
                                       const SkewForm& form_tgt, double tol, double rank_tol) {
  if (form_src.dim() != map.source().dim())
    throw ShapeError("source form dim " + std::to_string(form_src.dim()) + " != map source dim " +
                     std::to_string(map.source().dim()));
  if (form_tgt.dim() != map.target().dim())
    throw ShapeError("target form dim " + std::to_string(form_tgt.dim()) + " != map target dim " +
                     std::to_string(map.target().dim()));

  WeakIsometryReport r;
  const int n = map.source().dim();
  r.dense_range = numerical_rank(map.matrix(), rank_tol) == map.target().dim();

  const Subspace ker = kernel(map, rank_tol);
  const Subspace ker_perp = symplectic_orthogonal(form_src, ker, rank_tol);
  r.ker_dim = ker.dim();
  r.transversality_defect =
      static_cast<double>(subspace_intersection(ker.basis(), ker_perp.basis(), rank_tol).cols());
  r.max_principal_cosine = max_principal_cosine(ker.basis(), ker_perp.basis(), rank_tol);
  r.direct_sum_defect =
      static_cast<double>(n - subspace_sum(ker.basis(), ker_perp.basis(), rank_tol).cols());

  const Mat& l = map.matrix();
  const Mat diff = l.transpose() * form_tgt.matrix() * l - form_src.matrix();
  const Mat b = column_space(ker_perp.basis(), rank_tol);
  r.pullback_residual = b.cols() == 0 ? 0.0 : spectral_norm(b.transpose() * diff * b);

  const double scale = std::max(1.0, spectral_norm(form_src.matrix()));
  r.ok = r.dense_range && r.transversality_defect == 0.0 && r.pullback_residual <= tol * scale;
  return r;
}

}  // namespace wsym
