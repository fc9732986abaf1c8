#ifndef TRAINDESIGN_CHANNEL_HPP
#define TRAINDESIGN_CHANNEL_HPP

#include "traindesign/rng.hpp"
#include "traindesign/types.hpp"

namespace traindesign {

// Separable covariance of a matrix-valued variable X (receive x transmit
// orientation): cov(vec(X)) = left^T (x) right, with `left` acting on the
// column index of X and `right` on the row index. Both factors must be
// Hermitian positive definite; Cholesky factors are cached at construction.
class KroneckerCov {
 public:
  KroneckerCov(CMatrix left, CMatrix right);

  const CMatrix& left() const { return left_; }
  const CMatrix& right() const { return right_; }
  const CMatrix& left_chol() const { return left_chol_; }
  const CMatrix& right_chol() const { return right_chol_; }

  CMatrix full() const;

  // X = right_chol * Z * left_chol^H with Z iid CN(0,1), so that
  // cov(vec(X)) equals full().
  CMatrix sample(StreamRng& rng) const;

 private:
  CMatrix left_, right_;
  CMatrix left_chol_, right_chol_;  // lower triangular
};

// Exponential correlation matrix: entry (i,j) = r^(j-i) for j >= i,
// completed Hermitian below the diagonal. Requires |r| < 1.
CMatrix exponential_corr(Eigen::Index dim, cplx r);

// Draw H (n_R x n_T) with cov(vec(H)) = R_T^T (x) R_R.
CMatrix sample_channel(const KroneckerCov& R, StreamRng& rng);

// One innovation step: H + mu * E with E iid CN(0,1).
CMatrix evolve_channel(const CMatrix& H, double mu, StreamRng& rng);

// Training-phase observation Y = H P + N, with N drawn from the noise
// covariance S (left factor B x B temporal, right factor n_R x n_R spatial).
CMatrix simulate_training(const CMatrix& H, const CMatrix& P,
                          const KroneckerCov& S, StreamRng& rng);

}  // namespace traindesign

#endif
