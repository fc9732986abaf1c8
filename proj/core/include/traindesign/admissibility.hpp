#ifndef TRAINDESIGN_ADMISSIBILITY_HPP
#define TRAINDESIGN_ADMISSIBILITY_HPP

#include <functional>
#include <vector>

#include "traindesign/types.hpp"

namespace traindesign {

// Separable weight of the performance quadratic form
// J ~ vec^H(Htilde) [I_T^T (x) I_R] vec(Htilde).
// Both factors are Hermitian PSD.
struct Admissibility {
  CMatrix I_T;  // n_T x n_T, transmit-side weight
  CMatrix I_R;  // n_R x n_R, receive-side weight

  CMatrix full() const;
  // The quadratic form itself, tr(Htilde^H I_R Htilde I_T).
  double quad(const CMatrix& Htilde) const;
};

// Power spectral density of the data-phase noise: omega -> Hermitian PD
// n_R x n_R matrix on [-pi, pi).
class NoiseSpectrum {
 public:
  NoiseSpectrum(std::function<CMatrix(double)> psd, Eigen::Index dim);

  CMatrix operator()(double omega) const { return psd_(omega); }
  Eigen::Index dim() const { return dim_; }

  // Midpoint nodes of the K-point uniform grid on [-pi, pi).
  static std::vector<double> freq_grid(int K);

 private:
  std::function<CMatrix(double)> psd_;
  Eigen::Index dim_;
};

// First-order autoregressive temporal shaping with spatial color S_R:
// Phi_n(omega) = sigma2 (1-|r|^2) / |1 - r e^{-j omega}|^2 * S_R.
NoiseSpectrum ar1_noise_spectrum(const CMatrix& S_R, cplx r, double sigma2);

// Frequency-flat noise, Phi_n(omega) = sigma2 * S_R.
NoiseSpectrum flat_noise_spectrum(const CMatrix& S_R, double sigma2);

// Plain channel-MSE weight: identity on both sides.
Admissibility iadm_channel_mse(Eigen::Index n_t, Eigen::Index n_r);

// Weighted (L-type) estimation error vec^H(Htilde) [W1 (x) W2] vec(Htilde).
Admissibility iadm_l_optimality(const CMatrix& W1, const CMatrix& W2);

// MMSE equalizer for the flat block channel at one frequency:
// F = H^H (H H^H + Phi_n(omega)/lambda_x)^{-1}.
CMatrix wiener_filter(const CMatrix& H, double lambda_x,
                      const NoiseSpectrum& Phi_n, double omega);

// Exact excess MSE of the equalizer built from H + Htilde relative to the
// clairvoyant one, integrated over frequency (K-point midpoint rule).
double jce_exact(const CMatrix& H, const CMatrix& Htilde, double lambda_x,
                 const NoiseSpectrum& Phi_n, int K = 512);

enum class SnrRegime { High, Low };

// Second-order weight of the equalization excess MSE around H.
Admissibility iadm_equalization(const CMatrix& H, double lambda_x,
                                const NoiseSpectrum& Phi_n, SnrRegime regime,
                                int K = 512);

// Second-order weight of the zero-forcing precoding excess MSE; requires a
// full-row-rank channel (n_T >= n_R).
Admissibility iadm_zf(const CMatrix& H, double lambda_x);

// Exact ZF precoding excess MSE lambda_x |H (H+Htilde)^+ - I|_F^2.
double jzf_exact(const CMatrix& H, const CMatrix& Htilde, double lambda_x);

}  // namespace traindesign

#endif
