#include "traindesign/channel.hpp"

#include <cmath>

#include "traindesign/linalg.hpp"

namespace traindesign {

namespace {

CMatrix chol_lower(const CMatrix& M, const char* which) {
  if (M.rows() != M.cols())
    throw DimensionError(std::string("KroneckerCov: ") + which +
                         " factor must be square");
  if ((M - M.adjoint()).norm() > tol_scale(1e-10, M.norm()))
    throw DimensionError(std::string("KroneckerCov: ") + which +
                         " factor is not Hermitian");
  Eigen::LLT<CMatrix> llt(0.5 * (M + M.adjoint()));
  if (llt.info() != Eigen::Success)
    throw RankError(std::string("KroneckerCov: ") + which +
                    " factor is not positive definite");
  return llt.matrixL();
}

}  // namespace

KroneckerCov::KroneckerCov(CMatrix left, CMatrix right)
    : left_(std::move(left)), right_(std::move(right)) {
  left_chol_ = chol_lower(left_, "left");
  right_chol_ = chol_lower(right_, "right");
}

CMatrix KroneckerCov::full() const {
  return kron(left_.transpose(), right_);
}

CMatrix KroneckerCov::sample(StreamRng& rng) const {
  CMatrix Z = rng.gauss_matrix(right_.rows(), left_.rows());
  return right_chol_ * Z * left_chol_.adjoint();
}

CMatrix exponential_corr(Eigen::Index dim, cplx r) {
  if (dim <= 0) throw DimensionError("exponential_corr: dimension must be positive");
  if (std::abs(r) >= 1.0)
    throw DimensionError("exponential_corr: |r| must be < 1, got " +
                         std::to_string(std::abs(r)));
  CMatrix M(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    M(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const cplx v = std::pow(r, static_cast<double>(j - i));
      M(i, j) = v;
      M(j, i) = std::conj(v);
    }
  }
  return M;
}

CMatrix sample_channel(const KroneckerCov& R, StreamRng& rng) {
  return R.sample(rng);
}

CMatrix evolve_channel(const CMatrix& H, double mu, StreamRng& rng) {
  if (mu < 0.0) throw DimensionError("evolve_channel: step size must be >= 0");
  return H + mu * rng.gauss_matrix(H.rows(), H.cols());
}

CMatrix simulate_training(const CMatrix& H, const CMatrix& P,
                          const KroneckerCov& S, StreamRng& rng) {
  if (H.cols() != P.rows())
    throw DimensionError("simulate_training: channel has " +
                         std::to_string(H.cols()) + " inputs but training has " +
                         std::to_string(P.rows()) + " rows");
  if (S.left().rows() != P.cols())
    throw DimensionError("simulate_training: noise temporal factor is " +
                         std::to_string(S.left().rows()) +
                         " but training spans " + std::to_string(P.cols()) +
                         " slots");
  if (S.right().rows() != H.rows())
    throw DimensionError("simulate_training: noise spatial factor does not match receiver count");
  return H * P + S.sample(rng);
}

}  // namespace traindesign
