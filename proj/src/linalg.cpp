#include "ncr/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ncr {

std::string to_string(Field f) { return f == Field::Real ? "R" : "C"; }

Field field_from_string(const std::string& s) {
  if (s == "R" || s == "r") return Field::Real;
  if (s == "C" || s == "c") return Field::Complex;
  throw InputError("unknown field tag '" + s + "' (expected R or C)");
}

namespace linalg {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat pinv(const Mat& a, double rtol) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  const double cutoff = rtol * (s.size() ? s(0) : 0.0);
  Vec inv_s = Vec::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) inv_s(i) = 1.0 / s(i);
  return svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
}

HermitianEig hermitian_eig(const Mat& a) {
  if (a.rows() != a.cols()) throw InputError("hermitian_eig: matrix is not square");
  const double norm = a.size() ? a.norm() : 0.0;
  if ((a - a.adjoint()).norm() > 1e-10 * (1.0 + norm))
    throw InputError("hermitian_eig: matrix is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Mat> es(real_part(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat kernel_basis(const Mat& a, double rtol) {
  const Index n = a.rows();
  if (n == 0) return Mat(0, 0);
  HermitianEig eig = hermitian_eig(a);
  const double cutoff = rtol * std::max(1.0, eig.eigenvalues.maxCoeff());
  Index k = 0;
  while (k < n && eig.eigenvalues(k) <= cutoff) ++k;
  return eig.eigenvectors.leftCols(k);
}

RVec singular_values(const Mat& a) {
  if (a.size() == 0) return RVec(0);
  if (a.rows() <= 16 && a.cols() <= 16) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues();
}

double min_singular_value(const Mat& a) {
  RVec s = singular_values(a);
  return s.size() ? s(s.size() - 1) : 0.0;
}

double spectral_norm(const Mat& a) {
  RVec s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

Mat real_part(const Mat& y) { return 0.5 * (y + y.adjoint()); }

bool is_selfadjoint(const Mat& a, double tol) {
  return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol;
}

RMat real_embedding(const Mat& a) {
  const Index r = a.rows(), c = a.cols();
  RMat out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = a.real();
  out.topRightCorner(r, c) = -a.imag();
  out.bottomLeftCorner(r, c) = a.imag();
  out.bottomRightCorner(r, c) = a.real();
  return out;
}

Mat orthonormal_columns(const Mat& a, double rtol, double atol) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  const double cutoff = std::max(atol, rtol * s(0));
  Index k = 0;
  while (k < s.size() && s(k) > cutoff) ++k;
  return svd.matrixU().leftCols(k);
}

RMat null_space(const RMat& a, double rtol) {
  const Index n = a.cols();
  if (a.rows() == 0) return RMat::Identity(n, n);
  Eigen::BDCSVD<RMat> svd(a, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double cutoff = rtol * std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat inv_sqrt_psd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(real_part(a));
  RVec d = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Mat sqrt_psd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(real_part(a));
  RVec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace linalg
}  // namespace ncr
