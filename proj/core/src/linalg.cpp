#include "wsym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wsym {

Vec singular_values(const Mat& a) {
  if (a.size() == 0) return Vec(0);
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues();
}

int numerical_rank(const Mat& a, double rank_tol) {
  const Vec s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rank_tol * s(0);
  return static_cast<int>((s.array() > cut).count());
}

Mat null_space(const Mat& a, double rank_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double cut = rank_tol * s(0);
    r = (s.array() > cut).count();
  }
  return svd.matrixV().rightCols(n - r);
}

Mat column_space(const Mat& a, double rank_tol) {
  const Eigen::Index m = a.rows();
  if (a.cols() == 0 || m == 0) return Mat(m, 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s(0) > 0.0) r = (s.array() > rank_tol * s(0)).count();
  return svd.matrixU().leftCols(r);
}

Mat subspace_sum(const Mat& a, const Mat& b, double rank_tol) {
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << column_space(a, rank_tol), column_space(b, rank_tol);
  return column_space(ab, rank_tol);
}

Mat subspace_intersection(const Mat& a, const Mat& b, double rank_tol) {
  const Mat qa = column_space(a, rank_tol);
  const Mat qb = column_space(b, rank_tol);
  if (qa.cols() == 0 || qb.cols() == 0) return Mat(a.rows(), 0);
  Mat stacked(qa.rows(), qa.cols() + qb.cols());
  stacked << qa, -qb;
  const Mat coeffs = null_space(stacked, rank_tol);
  return column_space(qa * coeffs.topRows(qa.cols()), rank_tol);
}

double containment_defect(const Mat& outer, const Mat& inner, double rank_tol) {
  const Mat qi = column_space(inner, rank_tol);
  if (qi.cols() == 0) return 0.0;
  const Mat qo = column_space(outer, rank_tol);
  const Mat resid = qi - qo * (qo.transpose() * qi);
  const Vec s = singular_values(resid);
  return s.size() == 0 ? 0.0 : s(0);
}

bool subspace_contains(const Mat& outer, const Mat& inner, double tol) {
  return containment_defect(outer, inner, kRankTol) <= tol;
}

bool subspaces_equal(const Mat& a, const Mat& b, double tol) {
  return subspace_contains(a, b, tol) && subspace_contains(b, a, tol);
}

double max_principal_cosine(const Mat& a, const Mat& b, double rank_tol) {
  const Mat qa = column_space(a, rank_tol);
  const Mat qb = column_space(b, rank_tol);
  if (qa.cols() == 0 || qb.cols() == 0) return 0.0;
  const Vec s = singular_values(qa.transpose() * qb);
  return std::min(1.0, s(0));
}

double skew_defect(const Mat& a) {
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a + a.transpose()).norm() / n;
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double random_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on raw engine output so sampled values do not depend on the
// standard library's distribution implementations.
Vec random_gaussian(Rng& rng, Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; i += 2) {
    double u1 = random_uniform(rng);
    while (u1 <= 0.0) u1 = random_uniform(rng);
    const double u2 = random_uniform(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    v(i) = r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < n) v(i + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
  }
  return v;
}

Mat random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  const Vec flat = random_gaussian(rng, rows * cols);
  return Eigen::Map<const Mat>(flat.data(), rows, cols);
}

Vec random_unit(Rng& rng, Eigen::Index n) {
  Vec v = random_gaussian(rng, n);
  double nv = v.norm();
  while (nv == 0.0) {
    v = random_gaussian(rng, n);
    nv = v.norm();
  }
  return v / nv;
}

}  // namespace wsym
