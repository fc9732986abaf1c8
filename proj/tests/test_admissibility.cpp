#include <doctest.h>

#include <cmath>

#include <traindesign/admissibility.hpp>
#include <traindesign/channel.hpp>
#include <traindesign/linalg.hpp>

#include "oracles.hpp"

using namespace traindesign;

namespace {

// Midpoint average of a matrix-valued function of frequency.
template <typename F>
CMatrix freq_average(Eigen::Index dim, int K, F f) {
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (double w : NoiseSpectrum::freq_grid(K)) acc += f(w);
  return acc / static_cast<double>(K);
}

// Mean square symbol error of an arbitrary equalizer F at one frequency.
double equalizer_mse(const CMatrix& F, const CMatrix& H, double lambda_x,
                     const CMatrix& phi) {
  Eigen::Index n_t = H.cols();
  return lambda_x * (F * H - CMatrix::Identity(n_t, n_t)).squaredNorm() +
         (F * phi * F.adjoint()).trace().real();
}

}  // namespace

TEST_CASE("Admissibility quad matches the assembled quadratic form") {
  StreamRng rng(61, 0, Stream::Generic);
  Admissibility adm{oracles::random_psd(3, 3, rng),
                    oracles::random_psd(2, 2, rng)};
  CHECK(oracles::rel_err(adm.full(),
                         kron(CMatrix(adm.I_T.transpose()), adm.I_R)) <
        1e-13);
  for (int rep = 0; rep < 5; ++rep) {
    CMatrix X = rng.gauss_matrix(2, 3);
    CVector v = vec(X);
    double direct = (v.adjoint() * adm.full() * v)(0, 0).real();
    CHECK(oracles::rel_err(adm.quad(X), direct) < 1e-12);
  }
}

TEST_CASE("iadm_channel_mse weighs both sides by identity") {
  Admissibility adm = iadm_channel_mse(3, 2);
  CHECK((adm.I_T - CMatrix::Identity(3, 3)).norm() == 0.0);
  CHECK((adm.I_R - CMatrix::Identity(2, 2)).norm() == 0.0);
  StreamRng rng(62, 0, Stream::Generic);
  CMatrix X = rng.gauss_matrix(2, 3);
  CHECK(oracles::rel_err(adm.quad(X), X.squaredNorm()) < 1e-13);
}

TEST_CASE("iadm_l_optimality realizes the weighted error form") {
  StreamRng rng(63, 0, Stream::Generic);
  CMatrix W1 = oracles::random_psd(3, 3, rng);
  CMatrix W2 = oracles::random_psd(2, 2, rng);
  Admissibility adm = iadm_l_optimality(W1, W2);
  CHECK(oracles::rel_err(adm.full(), kron(W1, W2)) < 1e-13);
  CHECK_THROWS_AS(iadm_l_optimality(rng.gauss_matrix(3, 3), W2),
                  DimensionError);
}

TEST_CASE("wiener_filter minimizes the per frequency symbol MSE") {
  StreamRng rng(64, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(3, 2);
  CMatrix S_R = exponential_corr(3, cplx(0.4, 0.1));
  NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.9, 0.0), 0.05);
  double lambda_x = 1.0;
  for (double w : {0.0, 1.1, -2.5}) {
    CMatrix F = wiener_filter(H, lambda_x, phi, w);
    double base = equalizer_mse(F, H, lambda_x, phi(w));
    for (int rep = 0; rep < 6; ++rep) {
      CMatrix D = 0.01 * rng.gauss_matrix(2, 3);
      CHECK(equalizer_mse(F + D, H, lambda_x, phi(w)) >= base - 1e-12);
    }
  }
}

TEST_CASE("jce_exact vanishes at zero error and grows quadratically") {
  StreamRng rng(65, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(3, 2);
  CMatrix S_R = exponential_corr(3, cplx(0.4, 0.1));
  NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.9, 0.0), 0.05);

  CHECK(jce_exact(H, CMatrix::Zero(3, 2), 1.0, phi) == 0.0);

  CMatrix X = rng.gauss_matrix(3, 2);
  double j3 = jce_exact(H, CMatrix(1e-3 * X), 1.0, phi);
  double j4 = jce_exact(H, CMatrix(1e-4 * X), 1.0, phi);
  CHECK(j3 > 0.0);
  CHECK(oracles::rel_err(j3 / 1e-6, j4 / 1e-8) < 0.02);
}

TEST_CASE("jce_exact is converged at the default grid") {
  StreamRng rng(66, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(2, 2);
  CMatrix X = 0.01 * rng.gauss_matrix(2, 2);
  NoiseSpectrum phi =
      ar1_noise_spectrum(exponential_corr(2, cplx(0.3, 0.0)),
                         cplx(0.9, 0.0), 0.1);
  double coarse = jce_exact(H, X, 1.0, phi, 512);
  double fine = jce_exact(H, X, 1.0, phi, 4096);
  CHECK(oracles::rel_err(coarse, fine) < 1e-6);
}

TEST_CASE("equalization weight matches the curvature of the exact loss") {
  StreamRng rng(67, 0, Stream::Generic);
  double lambda_x = 1.0;
  double sigma2 = 1e-4;  // data SNR 40 dB
  struct Dims {
    int n_r, n_t;
  };
  for (Dims d : {Dims{2, 3}, Dims{3, 3}, Dims{4, 2}}) {
    CMatrix H = rng.gauss_matrix(d.n_r, d.n_t);
    CMatrix S_R = exponential_corr(d.n_r, cplx(0.3, 0.1));
    NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.9, 0.0), sigma2);
    Admissibility adm =
        iadm_equalization(H, lambda_x, phi, SnrRegime::High);
    CMatrix X = rng.gauss_matrix(d.n_r, d.n_t);
    double t = 1e-3 * H.norm() / X.norm();
    double exact = jce_exact(H, CMatrix(t * X), lambda_x, phi);
    CHECK(oracles::rel_err(t * t * adm.quad(X), exact) < 0.05);
  }

  SUBCASE("low SNR regime") {
    CMatrix H = rng.gauss_matrix(3, 2);
    CMatrix S_R = exponential_corr(3, cplx(0.3, 0.1));
    NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.9, 0.0), 1e4);
    Admissibility adm = iadm_equalization(H, lambda_x, phi, SnrRegime::Low);
    CMatrix X = rng.gauss_matrix(3, 2);
    double t = 1e-3 * H.norm() / X.norm();
    double exact = jce_exact(H, CMatrix(t * X), lambda_x, phi);
    CHECK(oracles::rel_err(t * t * adm.quad(X), exact) < 0.05);
  }
}

TEST_CASE("square channel equalization weight has the closed form") {
  StreamRng rng(68, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(3, 3);
  NoiseSpectrum phi =
      flat_noise_spectrum(exponential_corr(3, cplx(0.2, 0.0)), 1e-5);
  Admissibility adm = iadm_equalization(H, 1.0, phi, SnrRegime::High);
  CMatrix HHh = H * H.adjoint();
  CHECK(oracles::rel_err(adm.I_R,
                         HHh.llt().solve(CMatrix::Identity(3, 3))) < 1e-10);
  CHECK(oracles::rel_err(adm.I_T, CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("tall channel equalization weight averages the projected inverse") {
  StreamRng rng(69, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(4, 2);
  CMatrix S_R = exponential_corr(4, cplx(0.3, 0.1));
  NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.9, 0.0), 0.01);
  int K = 512;
  Admissibility adm = iadm_equalization(H, 1.0, phi, SnrRegime::High, K);
  CMatrix expected = freq_average(4, K, [&](double w) {
    CMatrix ph = phi(w);
    CMatrix half = herm_sqrt(ph);
    CMatrix hinv = pinv(half);
    CMatrix core = hinv * H * H.adjoint() * hinv.adjoint();
    return CMatrix(hinv.adjoint() * pinv(core) * hinv);
  });
  CHECK(oracles::rel_err(adm.I_R, expected) < 1e-9);
}

TEST_CASE("low SNR equalization weight averages the inverse spectrum") {
  CMatrix S_R = exponential_corr(2, cplx(0.5, 0.0));
  NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.9, 0.0), 10.0);
  double lambda_x = 2.0;
  int K = 512;
  StreamRng rng(70, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(2, 3);
  Admissibility adm = iadm_equalization(H, lambda_x, phi, SnrRegime::Low, K);
  CMatrix expected =
      lambda_x * lambda_x *
      freq_average(2, K, [&](double w) {
        return CMatrix(phi(w).llt().solve(CMatrix::Identity(2, 2)));
      });
  CHECK(oracles::rel_err(adm.I_R, expected) < 1e-9);
  CHECK(oracles::rel_err(adm.I_T, CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("zero forcing weight matches the curvature of the exact loss") {
  StreamRng rng(71, 0, Stream::Generic);
  for (auto [n_r, n_t] : {std::pair<int, int>{3, 3}, {2, 4}}) {
    CMatrix H = rng.gauss_matrix(n_r, n_t);
    double lambda_x = 1.7;
    Admissibility adm = iadm_zf(H, lambda_x);
    CHECK(oracles::rel_err(adm.I_R, CMatrix::Identity(n_r, n_r)) < 1e-12);
    CMatrix X = rng.gauss_matrix(n_r, n_t);
    double t = 1e-5;
    double exact = jzf_exact(H, CMatrix(t * X), lambda_x);
    CHECK(oracles::rel_err(t * t * adm.quad(X), exact) < 1e-3);
  }
}

TEST_CASE("zero forcing weight requires full row rank") {
  StreamRng rng(72, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(3, 1) * rng.gauss_matrix(1, 3);
  CHECK_THROWS_AS(iadm_zf(H, 1.0), RankError);
}

TEST_CASE("jzf_exact is zero at perfect knowledge and scales with power") {
  StreamRng rng(73, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(2, 3);
  CHECK(jzf_exact(H, CMatrix::Zero(2, 3), 1.0) < 1e-25);
  CMatrix X = rng.gauss_matrix(2, 3);
  CHECK(oracles::rel_err(jzf_exact(H, X, 3.0), 3.0 * jzf_exact(H, X, 1.0)) <
        1e-12);
}
