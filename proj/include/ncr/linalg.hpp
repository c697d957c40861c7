#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncr {

using Scalar = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ground field of an expression, pencil or point.
enum class Field { Real, Complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

/// Raised on malformed input: size or arity mismatches, bad field tags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace linalg {

/// Default relative cutoff for pinv.
inline constexpr double kPinvRtol = 1e-10;
/// Default relative cutoff for rank and kernel decisions.
inline constexpr double kRankRtol = 1e-8;

struct HermitianEig {
  RVec eigenvalues;  // ascending
  Mat eigenvectors;  // unitary, columns match eigenvalues
};

Mat kron(const Mat& a, const Mat& b);

/// Moore-Penrose pseudoinverse; singular values <= rtol * sigma_max are dropped.
Mat pinv(const Mat& a, double rtol = kPinvRtol);

/// Spectral decomposition of a self-adjoint matrix. Throws InputError when
/// ||a - a*|| > 1e-10 (1 + ||a||).
HermitianEig hermitian_eig(const Mat& a);

/// Orthonormal basis of the span of eigenvectors whose eigenvalue is
/// <= rtol * max(1, lambda_max). Returns an n x 0 matrix when the kernel is
/// trivial.
Mat kernel_basis(const Mat& a, double rtol = kRankRtol);

double min_singular_value(const Mat& a);
RVec singular_values(const Mat& a);
double spectral_norm(const Mat& a);

/// Self-adjoint part (Y + Y*) / 2.
Mat real_part(const Mat& y);

bool is_selfadjoint(const Mat& a, double tol);

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a complex matrix.
RMat real_embedding(const Mat& a);

/// Orthonormal basis of the column span, cutoff relative to the largest
/// singular value (absolute floor `atol`).
Mat orthonormal_columns(const Mat& a, double rtol = 1e-9, double atol = 0.0);

/// Orthonormal basis of the null space of a real matrix (right kernel).
RMat null_space(const RMat& a, double rtol = 1e-10);

/// Inverse square root of a Hermitian positive definite matrix.
Mat inv_sqrt_psd(const Mat& a);
/// Square root of a Hermitian PSD matrix (negative eigenvalues clipped).
Mat sqrt_psd(const Mat& a);

}  // namespace linalg
}  // namespace ncr
