#ifndef TRAINDESIGN_LINALG_HPP
#define TRAINDESIGN_LINALG_HPP

#include "traindesign/types.hpp"

namespace traindesign {

enum class EigOrder { Ascending, Descending };

// Eigendecomposition of a Hermitian matrix, M = U diag(d) U^H.
// Columns of U follow the requested eigenvalue order; ties are broken by
// descending magnitude of the first nonzero eigenvector component, and each
// column is scaled so its first nonzero entry is real and positive.
struct HermEig {
  CMatrix U;
  RVector d;
};

HermEig herm_eig(const CMatrix& M, EigOrder order = EigOrder::Ascending);

// Thin SVD, M = U diag(sigma) V^H with sigma descending.
struct Svd {
  CMatrix U;
  RVector sigma;
  CMatrix V;
};

Svd svd(const CMatrix& M);

CMatrix kron(const CMatrix& A, const CMatrix& B);

CVector vec(const CMatrix& M);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

// Permutation K with K vec(M) = vec(M^T) for any m x n matrix M.
Eigen::MatrixXd commutation_matrix(Eigen::Index m, Eigen::Index n);

// Hermitian projection onto the PSD cone: negative eigenvalues are set to
// zero, as are eigenvalues below 1e-12 of the largest magnitude.
CMatrix positive_part(const CMatrix& M);

// Principal square root of a Hermitian PSD matrix.
CMatrix herm_sqrt(const CMatrix& M);

// Moore-Penrose pseudoinverse; singular values below rtol * sigma_max
// are treated as zero.
CMatrix pinv(const CMatrix& M, double rtol = 1e-12);

// Smallest eigenvalue of a Hermitian matrix.
double min_eig_herm(const CMatrix& M);

// True when min_eig_herm(M) >= -tol * max(1, |lambda|_max).
bool is_psd(const CMatrix& M, double tol = 1e-10);

// Quantile of the chi-square distribution with k degrees of freedom:
// the x with CDF(x) = alpha, solved to |CDF - alpha| < 1e-12.
double chi2_quantile(double alpha, int k);

// Regularized lower incomplete gamma P(a, x) (chi-square CDF building block).
double gamma_p(double a, double x);

}  // namespace traindesign

#endif
