#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace wsym {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Relative threshold for every SVD-based rank decision in the library.
inline constexpr double kRankTol = 1e-10;

/// Singular values of a matrix, descending. Empty matrices give an empty vector.
Vec singular_values(const Mat& a);

/// Numerical rank: number of singular values above rank_tol * sigma_max.
int numerical_rank(const Mat& a, double rank_tol = kRankTol);

/// Orthonormal basis of the null space {x : a x = 0}.
Mat null_space(const Mat& a, double rank_tol = kRankTol);

/// Orthonormal basis of the column space of a.
Mat column_space(const Mat& a, double rank_tol = kRankTol);

/// Orthonormal basis of span(a) + span(b).
Mat subspace_sum(const Mat& a, const Mat& b, double rank_tol = kRankTol);

/// Orthonormal basis of span(a) ∩ span(b).
Mat subspace_intersection(const Mat& a, const Mat& b, double rank_tol = kRankTol);

/// Largest distance of a unit vector of span(inner) from span(outer).
/// Zero (up to rounding) iff span(inner) ⊆ span(outer).
double containment_defect(const Mat& outer, const Mat& inner, double rank_tol = kRankTol);

bool subspace_contains(const Mat& outer, const Mat& inner, double tol = kRankTol);

/// Two-sided containment of column spaces; bases are never compared directly.
bool subspaces_equal(const Mat& a, const Mat& b, double tol = kRankTol);

/// Cosine of the smallest principal angle between span(a) and span(b); 0 if either is trivial.
double max_principal_cosine(const Mat& a, const Mat& b, double rank_tol = kRankTol);

/// ‖a + aᵀ‖ / ‖a‖ in the Frobenius norm (0 for the zero matrix).
double skew_defect(const Mat& a);

/// Largest absolute entry.
double max_abs(const Mat& a);

/// Deterministic generator used for every sampled quantity.
using Rng = std::mt19937_64;

/// Uniform on [0, 1), built from the raw engine output.
double random_uniform(Rng& rng);
Vec random_gaussian(Rng& rng, Eigen::Index n);
Mat random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);
/// Uniform on the Euclidean unit sphere.
Vec random_unit(Rng& rng, Eigen::Index n);

}  // namespace wsym
