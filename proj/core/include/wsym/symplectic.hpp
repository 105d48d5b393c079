#pragma once

#include <memory>
#include <string>

#include "wsym/linalg.hpp"

namespace wsym {

/// A finite-dimensional truncation of a Banach level: ℝ^dim with the norm
/// ‖u‖² = uᵀ·gram·u. Cheap to copy; the data is shared and immutable.
class ModelSpace {
 public:
  /// Euclidean space (identity gram).
  explicit ModelSpace(int dim, std::string label = {});
  /// Throws ShapeError unless gram is square, symmetric (1e-12 relative) and positive definite.
  explicit ModelSpace(Mat gram, std::string label = {});

  int dim() const { return static_cast<int>(data_->gram.rows()); }
  const Mat& gram() const { return data_->gram; }
  const std::string& label() const { return data_->label; }
  bool has_identity_gram() const { return data_->identity; }

  double norm(const Vec& u) const;
  /// Dual norm of a covector c (given in the standard pairing): sqrt(cᵀ·gram⁻¹·c).
  double dual_norm(const Vec& c) const;

  /// W with Wᵀ·gram·W = I; columns form a gram-orthonormal basis.
  const Mat& orthonormal_frame() const { return data_->frame; }
  /// Inverse of orthonormal_frame() (the transposed Cholesky factor).
  const Mat& frame_inverse() const { return data_->frame_inv; }

  friend bool operator==(const ModelSpace& a, const ModelSpace& b) {
    return a.data_ == b.data_ || (a.dim() == b.dim() && a.gram() == b.gram());
  }

 private:
  struct Data {
    Mat gram;
    Mat frame;
    Mat frame_inv;
    std::string label;
    bool identity = false;
  };
  std::shared_ptr<const Data> data_;
};

/// Constant skew bilinear form ω(u,v) = uᵀ·Ω·v on a model space.
class SkewForm {
 public:
  /// Throws ShapeError on dimension mismatch or if ‖Ω + Ωᵀ‖ > 1e-12·‖Ω‖.
  SkewForm(ModelSpace space, Mat matrix);

  const ModelSpace& space() const { return space_; }
  const Mat& matrix() const { return matrix_; }
  int dim() const { return space_.dim(); }

  double operator()(const Vec& u, const Vec& v) const { return u.dot(matrix_ * v); }

 private:
  ModelSpace space_;
  Mat matrix_;
};

/// Column span of a full-column-rank basis inside a model space (k may be 0).
class Subspace {
 public:
  Subspace(ModelSpace ambient, Mat basis, double rank_tol = kRankTol);

  static Subspace whole(const ModelSpace& ambient);
  static Subspace zero(const ModelSpace& ambient);

  const ModelSpace& ambient() const { return ambient_; }
  const Mat& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }

 private:
  ModelSpace ambient_;
  Mat basis_;
};

bool operator==(const Subspace& a, const Subspace& b);

class LinearMap {
 public:
  LinearMap(ModelSpace source, ModelSpace target, Mat matrix);

  static LinearMap identity(const ModelSpace& space);

  const ModelSpace& source() const { return source_; }
  const ModelSpace& target() const { return target_; }
  const Mat& matrix() const { return matrix_; }

  Vec operator()(const Vec& u) const { return matrix_ * u; }

  /// The matrix expressed in gram-orthonormal frames of source and target.
  Mat normalized() const;

 private:
  ModelSpace source_;
  ModelSpace target_;
  Mat matrix_;
};

/// outer ∘ inner
LinearMap compose(const LinearMap& outer, const LinearMap& inner);

/// ω♭ : u ↦ ω(u,·). The dual is identified with the space through the
/// standard pairing, so the matrix is Ωᵀ and (ω♭u)·v = ω(u,v).
LinearMap flat_operator(const SkewForm& form);

struct NondegeneracyReport {
  bool nondegenerate = false;
  double smallest_singular_value = 0.0;
};

NondegeneracyReport check_weak_nondegenerate(const SkewForm& form, double tol);

/// ω((u,η),(v,ξ)) = ⟨η,v⟩ − ⟨ξ,u⟩ on ℝ^{2·l_dim}, coordinates ordered (u-block, η-block).
SkewForm darboux_constant_form(int l_dim);

/// ‖u‖_ω = ‖ω♭(u)‖* with the dual norm taken w.r.t. the space's gram.
double omega_dual_norm(const SkewForm& form, const Vec& u);

struct Conditioning {
  double kappa = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Extreme singular values of ω♭ measured from (E, ‖·‖) to (E*, ‖·‖*).
/// Throws DegenerateFormError if sigma_min ≤ rank_tol·sigma_max.
Conditioning weakness_conditioning(const SkewForm& form, double rank_tol = kRankTol);

/// Singular values of ω♭ in the gram norms, without the degeneracy check.
Vec flat_singular_values(const SkewForm& form);

/// K^⊥ = {x : ω(x,y) = 0 for all y ∈ K}.
Subspace symplectic_orthogonal(const SkewForm& form, const Subspace& k, double rank_tol = kRankTol);

/// Bᵀ·Ω·B on the k-dimensional space with gram Bᵀ·gram·B.
SkewForm restrict_form(const SkewForm& form, const Subspace& k);

/// Lᵀ·Ω′·L on map.source().
SkewForm pullback_form(const LinearMap& map, const SkewForm& form);

/// Kernel of a linear map as a subspace of its source.
Subspace kernel(const LinearMap& map, double rank_tol = kRankTol);

/// Kernel of a form (the null space of its flat).
Subspace kernel(const SkewForm& form, double rank_tol = kRankTol);

struct WeakIsometryReport {
  bool ok = false;
  int ker_dim = 0;
  /// dim(ker ℓ ∩ (ker ℓ)^⊥) at rank_tol; zero iff the two are transverse.
  double transversality_defect = 0.0;
  /// Number of dimensions by which ker ℓ + (ker ℓ)^⊥ falls short of the source.
  double direct_sum_defect = 0.0;
  /// Cosine of the smallest principal angle between ker ℓ and (ker ℓ)^⊥.
  double max_principal_cosine = 0.0;
  /// ‖Bᵀ(ℓ*ω_tgt − ω_src)B‖₂ for an orthonormal basis B of (ker ℓ)^⊥.
  double pullback_residual = 0.0;
  bool dense_range = false;
};

WeakIsometryReport check_weak_isometry(const LinearMap& map, const SkewForm& form_src,
                                       const SkewForm& form_tgt, double tol,
                                       double rank_tol = kRankTol);

}  // namespace wsym
