#ifndef TRAINDESIGN_ESTIMATORS_HPP
#define TRAINDESIGN_ESTIMATORS_HPP

#include "traindesign/channel.hpp"
#include "traindesign/types.hpp"

namespace traindesign {

// Channel estimate plus the information matrix of the error: for the
// unbiased estimator cov(vec(Hhat - H)) = info^{-1}; for the Bayesian one
// info is the inverse posterior covariance.
struct EstimateResult {
  CMatrix Hhat;
  CMatrix info;  // (n_T n_R) x (n_T n_R), Hermitian positive definite
};

// Best linear unbiased estimate from Y = H P + N. Requires the training
// Gram P S_Q^{-1} P^H to be invertible (rank n_T).
EstimateResult mvu_estimate(const CMatrix& Y, const CMatrix& P,
                            const KroneckerCov& S);

// Linear minimum mean square error estimate under the channel prior R.
EstimateResult mmse_estimate(const CMatrix& Y, const CMatrix& P,
                             const KroneckerCov& R, const KroneckerCov& S);

// Normalized squared error |Hhat - H|_F^2 / |H|_F^2.
double nmse(const CMatrix& H, const CMatrix& Hhat);

// Radius of the level-alpha confidence region for the error quadratic form
// vec^H(Htilde) info vec(Htilde): half the chi-square alpha-quantile with
// 2 n_T n_R degrees of freedom.
double uncertainty_radius(double alpha, int n_t, int n_r);

}  // namespace traindesign

#endif
