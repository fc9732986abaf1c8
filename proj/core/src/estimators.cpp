#include "traindesign/estimators.hpp"

#include "traindesign/linalg.hpp"

namespace traindesign {

namespace {

void check_training_shapes(const CMatrix& Y, const CMatrix& P,
                           const KroneckerCov& S) {
  if (Y.cols() != P.cols())
    throw DimensionError("estimate: observation spans " + std::to_string(Y.cols()) +
                         " slots but training spans " + std::to_string(P.cols()));
  if (S.left().rows() != P.cols() || S.right().rows() != Y.rows())
    throw DimensionError("estimate: noise covariance factors do not match Y/P shapes");
}

// Gram of the training matrix under the temporal noise metric.
CMatrix whitened_gram(const CMatrix& P, const KroneckerCov& S) {
  const CMatrix SqInvPh = Eigen::LLT<CMatrix>(S.left()).solve(P.adjoint());
  return P * SqInvPh;
}

}  // namespace

EstimateResult mvu_estimate(const CMatrix& Y, const CMatrix& P,
                            const KroneckerCov& S) {
  check_training_shapes(Y, P, S);
  const Eigen::Index n_t = P.rows();
  if (P.cols() < n_t)
    throw RankError("mvu_estimate: training span " + std::to_string(P.cols()) +
                    " is shorter than the number of inputs " + std::to_string(n_t));

  const CMatrix SqInvPh = Eigen::LLT<CMatrix>(S.left()).solve(P.adjoint());
  const CMatrix G = P * SqInvPh;  // P S_Q^{-1} P^H, Hermitian
  Eigen::LDLT<CMatrix> gram(0.5 * (G + G.adjoint()));
  const double gmax = G.cwiseAbs().maxCoeff();
  if (gram.info() != Eigen::Success || !gram.isPositive() ||
      gram.vectorD().real().minCoeff() <= tol_scale(1e-13, gmax))
    throw RankError("mvu_estimate: training Gram P S_Q^{-1} P^H is singular "
                    "(training does not excite all " + std::to_string(n_t) +
                    " inputs)");

  EstimateResult out;
  out.Hhat = gram.solve((Y * SqInvPh).adjoint()).adjoint();  // Y S_Q^{-1} P^H G^{-1}
  const CMatrix SrInv =
      Eigen::LLT<CMatrix>(S.right()).solve(CMatrix::Identity(Y.rows(), Y.rows()));
  out.info = kron(G.transpose(), SrInv);
  return out;
}

EstimateResult mmse_estimate(const CMatrix& Y, const CMatrix& P,
                             const KroneckerCov& R, const KroneckerCov& S) {
  check_training_shapes(Y, P, S);
  if (R.left().rows() != P.rows() || R.right().rows() != Y.rows())
    throw DimensionError("mmse_estimate: prior covariance factors do not match shapes");

  const Eigen::Index n_r = Y.rows();
  const CMatrix G = whitened_gram(P, S);
  const CMatrix SrInv =
      Eigen::LLT<CMatrix>(S.right()).solve(CMatrix::Identity(n_r, n_r));
  const CMatrix data_info = kron(G.transpose(), SrInv);

  const CMatrix RtInv = Eigen::LLT<CMatrix>(R.left()).solve(
      CMatrix::Identity(R.left().rows(), R.left().rows()));
  const CMatrix RrInv =
      Eigen::LLT<CMatrix>(R.right()).solve(CMatrix::Identity(n_r, n_r));
  const CMatrix prior_info = kron(RtInv.transpose(), RrInv);

  // Whitened data folded with the prior; the posterior information matrix
  // never Kronecker-factors when the receive-side factors differ, so the
  // full (small) system is solved directly.
  const CMatrix SqInvPh = Eigen::LLT<CMatrix>(S.left()).solve(P.adjoint());
  const CVector rhs = vec(CMatrix(SrInv * Y * SqInvPh));

  EstimateResult out;
  out.info = prior_info + data_info;
  Eigen::LDLT<CMatrix> post(0.5 * (out.info + out.info.adjoint()));
  out.Hhat = unvec(post.solve(rhs), n_r, P.rows());
  return out;
}

double nmse(const CMatrix& H, const CMatrix& Hhat) {
  if (H.rows() != Hhat.rows() || H.cols() != Hhat.cols())
    throw DimensionError("nmse: shape mismatch");
  const double ref = H.squaredNorm();
  if (ref == 0.0) throw DimensionError("nmse: reference channel is zero");
  return (Hhat - H).squaredNorm() / ref;
}

double uncertainty_radius(double alpha, int n_t, int n_r) {
  if (n_t < 1 || n_r < 1)
    throw DimensionError("uncertainty_radius: dimensions must be positive");
  return 0.5 * chi2_quantile(alpha, 2 * n_t * n_r);
}

}  // namespace traindesign
