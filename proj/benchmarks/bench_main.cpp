#include <benchmark/benchmark.h>

#include <traindesign/admissibility.hpp>
#include <traindesign/channel.hpp>
#include <traindesign/designs.hpp>
#include <traindesign/estimators.hpp>
#include <traindesign/rng.hpp>

namespace {

using namespace traindesign;

// Random Hermitian PD matrix with a mild ridge so conditioning stays sane.
CMatrix random_pd(StreamRng& rng, Eigen::Index n) {
  CMatrix A = rng.gauss_matrix(n, n);
  CMatrix M = A * A.adjoint() / double(n);
  M += 0.1 * CMatrix::Identity(n, n);
  return M;
}

void BM_MinEnergyDesign(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  StreamRng rng(42, 0, Stream::Generic);
  CMatrix A = random_pd(rng, n + 2);
  CMatrix B = random_pd(rng, n);
  for (auto _ : state) {
    TrainingMatrix tm = solve_min_energy(A, B);
    benchmark::DoNotOptimize(tm.P.data());
  }
}
BENCHMARK(BM_MinEnergyDesign)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_GuaranteedPriorAware(benchmark::State& state) {
  const cplx rho(0.9, 0.0);
  CMatrix R_T = exponential_corr(4, rho);
  CMatrix R_R = exponential_corr(2, rho);
  CMatrix S_Q = exponential_corr(6, rho);
  Admissibility adm = iadm_channel_mse(4, 2);
  double c = guaranteed_constant(1.0, 0.99, 4, 2);
  for (auto _ : state) {
    AsgppDesign d =
        solve_asgpp(S_Q, R_R, R_T, R_R, adm, c, AsgppCase::RReqSR);
    benchmark::DoNotOptimize(d.train.P.data());
  }
}
BENCHMARK(BM_GuaranteedPriorAware);

void BM_BudgetedBayesDesign(benchmark::State& state) {
  const cplx rho(0.9, 0.0);
  CMatrix R_T = exponential_corr(4, rho);
  CMatrix R_R = exponential_corr(2, rho);
  CMatrix S_Q = exponential_corr(6, rho);
  Admissibility adm = iadm_channel_mse(4, 2);
  for (auto _ : state) {
    TrainingMatrix tm = solve_avg_mmse(R_T, R_R, S_Q, R_R, adm, 8.0,
                                       AvgMmseMode::IdentityWeight);
    benchmark::DoNotOptimize(tm.P.data());
  }
}
BENCHMARK(BM_BudgetedBayesDesign);

void BM_UnbiasedEstimate(benchmark::State& state) {
  const cplx rho(0.9, 0.0);
  KroneckerCov R(exponential_corr(4, rho), exponential_corr(2, rho));
  KroneckerCov S(exponential_corr(6, rho), exponential_corr(2, rho));
  StreamRng rng(42, 1, Stream::Generic);
  TrainingMatrix tm = white_training(4, 6, 8.0);
  CMatrix H = sample_channel(R, rng);
  CMatrix Y = H * tm.P + S.sample(rng);
  for (auto _ : state) {
    EstimateResult est = mvu_estimate(Y, tm.P, S);
    benchmark::DoNotOptimize(est.Hhat.data());
  }
}
BENCHMARK(BM_UnbiasedEstimate);

void BM_BayesEstimate(benchmark::State& state) {
  const cplx rho(0.9, 0.0);
  KroneckerCov R(exponential_corr(4, rho), exponential_corr(2, rho));
  KroneckerCov S(exponential_corr(6, rho), exponential_corr(2, rho));
  StreamRng rng(42, 1, Stream::Generic);
  TrainingMatrix tm = white_training(4, 6, 8.0);
  CMatrix H = sample_channel(R, rng);
  CMatrix Y = H * tm.P + S.sample(rng);
  for (auto _ : state) {
    EstimateResult est = mmse_estimate(Y, tm.P, R, S);
    benchmark::DoNotOptimize(est.Hhat.data());
  }
}
BENCHMARK(BM_BayesEstimate);

void BM_EqualizerExcessMse(benchmark::State& state) {
  const int K = int(state.range(0));
  StreamRng rng(42, 2, Stream::Generic);
  CMatrix S_R = exponential_corr(3, cplx(0.5, 0.1));
  NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.5, 0.0), 1e-2);
  CMatrix H = rng.gauss_matrix(3, 2);
  CMatrix Htilde = 1e-2 * rng.gauss_matrix(3, 2);
  for (auto _ : state) {
    double j = jce_exact(H, Htilde, 1.0, phi, K);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(BM_EqualizerExcessMse)->Arg(128)->Arg(512);

void BM_EqualizationWeight(benchmark::State& state) {
  StreamRng rng(42, 3, Stream::Generic);
  CMatrix S_R = exponential_corr(3, cplx(0.5, 0.1));
  NoiseSpectrum phi = ar1_noise_spectrum(S_R, cplx(0.5, 0.0), 1e-2);
  CMatrix H = rng.gauss_matrix(3, 2);
  for (auto _ : state) {
    Admissibility adm =
        iadm_equalization(H, 1.0, phi, SnrRegime::High, 512);
    benchmark::DoNotOptimize(adm.I_T.data());
  }
}
BENCHMARK(BM_EqualizationWeight);

}  // namespace

BENCHMARK_MAIN();
