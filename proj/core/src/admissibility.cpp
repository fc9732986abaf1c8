#include "traindesign/admissibility.hpp"

#include <cmath>

#include "traindesign/linalg.hpp"

namespace traindesign {

CMatrix Admissibility::full() const {
  return kron(I_T.transpose(), I_R);
}

double Admissibility::quad(const CMatrix& Htilde) const {
  if (Htilde.rows() != I_R.rows() || Htilde.cols() != I_T.rows())
    throw DimensionError("Admissibility::quad: error matrix shape mismatch");
  return (Htilde.adjoint() * I_R * Htilde * I_T).trace().real();
}

NoiseSpectrum::NoiseSpectrum(std::function<CMatrix(double)> psd, Eigen::Index dim)
    : psd_(std::move(psd)), dim_(dim) {
  if (dim <= 0) throw DimensionError("NoiseSpectrum: dimension must be positive");
}

std::vector<double> NoiseSpectrum::freq_grid(int K) {
  if (K <= 0) throw DimensionError("NoiseSpectrum: grid size must be positive");
  std::vector<double> w(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k)
    w[static_cast<size_t>(k)] = -M_PI + (k + 0.5) * (2.0 * M_PI / K);
  return w;
}

NoiseSpectrum ar1_noise_spectrum(const CMatrix& S_R, cplx r, double sigma2) {
  if (std::abs(r) >= 1.0)
    throw DimensionError("ar1_noise_spectrum: |r| must be < 1");
  if (sigma2 <= 0.0)
    throw DimensionError("ar1_noise_spectrum: variance must be positive");
  if (S_R.rows() != S_R.cols())
    throw DimensionError("ar1_noise_spectrum: spatial factor must be square");
  const CMatrix S = 0.5 * (S_R + S_R.adjoint());
  const double scale = sigma2 * (1.0 - std::norm(r));
  return NoiseSpectrum(
      [S, r, scale](double omega) -> CMatrix {
        const cplx den = 1.0 - r * std::exp(cplx(0.0, -omega));
        return (scale / std::norm(den)) * S;
      },
      S_R.rows());
}

NoiseSpectrum flat_noise_spectrum(const CMatrix& S_R, double sigma2) {
  if (sigma2 <= 0.0)
    throw DimensionError("flat_noise_spectrum: variance must be positive");
  const CMatrix S = sigma2 * 0.5 * (S_R + S_R.adjoint());
  return NoiseSpectrum([S](double) { return S; }, S_R.rows());
}

Admissibility iadm_channel_mse(Eigen::Index n_t, Eigen::Index n_r) {
  if (n_t <= 0 || n_r <= 0)
    throw DimensionError("iadm_channel_mse: dimensions must be positive");
  return {CMatrix::Identity(n_t, n_t), CMatrix::Identity(n_r, n_r)};
}

Admissibility iadm_l_optimality(const CMatrix& W1, const CMatrix& W2) {
  if (!is_psd(W1, 1e-10))
    throw DimensionError("iadm_l_optimality: W1 must be Hermitian PSD");
  if (!is_psd(W2, 1e-10))
    throw DimensionError("iadm_l_optimality: W2 must be Hermitian PSD");
  // J = vec^H(Htilde) [W1 (x) W2] vec(Htilde) maps onto the transposed-left
  // weight convention.
  return {W1.transpose(), W2};
}

CMatrix wiener_filter(const CMatrix& H, double lambda_x,
                      const NoiseSpectrum& Phi_n, double omega) {
  if (lambda_x <= 0.0)
    throw DimensionError("wiener_filter: symbol power must be positive");
  if (Phi_n.dim() != H.rows())
    throw DimensionError("wiener_filter: noise spectrum dimension mismatch");
  const CMatrix A = H * H.adjoint() + Phi_n(omega) / lambda_x;
  return Eigen::LDLT<CMatrix>(A).solve(H).adjoint();
}

double jce_exact(const CMatrix& H, const CMatrix& Htilde, double lambda_x,
                 const NoiseSpectrum& Phi_n, int K) {
  if (H.rows() != Htilde.rows() || H.cols() != Htilde.cols())
    throw DimensionError("jce_exact: error matrix shape mismatch");
  if (lambda_x <= 0.0)
    throw DimensionError("jce_exact: symbol power must be positive");
  const CMatrix Hh = H + Htilde;
  const CMatrix HHh = H * H.adjoint();
  const CMatrix HhHhh = Hh * Hh.adjoint();
  double acc = 0.0;
  for (double w : NoiseSpectrum::freq_grid(K)) {
    const CMatrix Phi = Phi_n(w);
    const CMatrix F_true =
        Eigen::LDLT<CMatrix>(HHh + Phi / lambda_x).solve(H).adjoint();
    const CMatrix F_est =
        Eigen::LDLT<CMatrix>(HhHhh + Phi / lambda_x).solve(Hh).adjoint();
    const CMatrix D = F_est - F_true;
    const CMatrix Phi_y = lambda_x * HHh + Phi;
    acc += (D * Phi_y * D.adjoint()).trace().real();
  }
  return acc / K;
}

namespace {

Eigen::Index effective_rank(const RVector& sigma) {
  if (sigma.size() == 0) return 0;
  const double cut = 1e-12 * sigma(0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

}  // namespace

Admissibility iadm_equalization(const CMatrix& H, double lambda_x,
                                const NoiseSpectrum& Phi_n, SnrRegime regime,
                                int K) {
  if (lambda_x <= 0.0)
    throw DimensionError("iadm_equalization: symbol power must be positive");
  if (Phi_n.dim() != H.rows())
    throw DimensionError("iadm_equalization: noise spectrum dimension mismatch");
  const Eigen::Index n_r = H.rows(), n_t = H.cols();

  if (regime == SnrRegime::Low) {
    CMatrix acc = CMatrix::Zero(n_r, n_r);
    for (double w : NoiseSpectrum::freq_grid(K))
      acc += Eigen::LDLT<CMatrix>(Phi_n(w)).solve(CMatrix::Identity(n_r, n_r));
    Admissibility out;
    out.I_T = CMatrix::Identity(n_t, n_t);
    out.I_R = (lambda_x * lambda_x / K) * acc;
    out.I_R = 0.5 * (out.I_R + out.I_R.adjoint());
    return out;
  }

  const Svd s = svd(H);
  const Eigen::Index rank = effective_rank(s.sigma);
  if (rank < std::min(n_r, n_t))
    throw RankError("iadm_equalization: channel is rank deficient (rank " +
                    std::to_string(rank) + " of " +
                    std::to_string(std::min(n_r, n_t)) + ")");

  Admissibility out;
  out.I_T = lambda_x * CMatrix::Identity(n_t, n_t);
  if (rank == n_r) {
    // Full row rank (covers the square case): frequency independent weight.
    out.I_R = Eigen::LDLT<CMatrix>(H * H.adjoint())
                  .solve(CMatrix::Identity(n_r, n_r));
  } else {
    // Tall channel with full column rank: project onto the whitened range.
    const CMatrix HHh = H * H.adjoint();
    CMatrix acc = CMatrix::Zero(n_r, n_r);
    for (double w : NoiseSpectrum::freq_grid(K)) {
      const CMatrix M = pinv(herm_sqrt(Phi_n(w)));  // Phi^{-1/2}
      acc += M * pinv(CMatrix(M * HHh * M)) * M;
    }
    out.I_R = acc / K;
  }
  out.I_R = 0.5 * (out.I_R + out.I_R.adjoint());
  return out;
}

Admissibility iadm_zf(const CMatrix& H, double lambda_x) {
  if (lambda_x <= 0.0)
    throw DimensionError("iadm_zf: symbol power must be positive");
  if (H.cols() < H.rows())
    throw DimensionError("iadm_zf: precoding requires at least as many inputs as outputs");
  const Svd s = svd(H);
  if (effective_rank(s.sigma) < H.rows())
    throw RankError("iadm_zf: channel does not have full row rank " +
                    std::to_string(H.rows()));
  const CMatrix Hp = pinv(H);
  Admissibility out;
  out.I_T = lambda_x * (Hp * Hp.adjoint());
  out.I_T = 0.5 * (out.I_T + out.I_T.adjoint());
  out.I_R = CMatrix::Identity(H.rows(), H.rows());
  return out;
}

double jzf_exact(const CMatrix& H, const CMatrix& Htilde, double lambda_x) {
  if (H.rows() != Htilde.rows() || H.cols() != Htilde.cols())
    throw DimensionError("jzf_exact: error matrix shape mismatch");
  if (H.cols() < H.rows())
    throw DimensionError("jzf_exact: precoding requires at least as many inputs as outputs");
  const CMatrix I = CMatrix::Identity(H.rows(), H.rows());
  return lambda_x * (H * pinv(CMatrix(H + Htilde)) - I).squaredNorm();
}

}  // namespace traindesign
