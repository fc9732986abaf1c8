#include "traindesign/designs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <string>

#include "traindesign/linalg.hpp"

namespace traindesign {

namespace {

void require_square(const CMatrix& M, const char* name) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw DimensionError(std::string(name) + " must be square and nonempty");
  }
}

// Largest eigenvalue of a Hermitian (up to roundoff) matrix.
double lambda_max_herm(const CMatrix& M) {
  CMatrix H = 0.5 * (M + M.adjoint());
  HermEig e = herm_eig(H, EigOrder::Descending);
  return e.d(0);
}

void require_close(const CMatrix& got, const CMatrix& want, const char* what) {
  double dev = (got - want).norm();
  if (dev > tol_scale(1e-9, want.norm())) {
    throw DimensionError(std::string(what) +
                         " violated (relative deviation " +
                         std::to_string(dev / std::max(1.0, want.norm())) +
                         ")");
  }
}

CMatrix permute_cols(const CMatrix& M, const std::vector<int>& perm) {
  CMatrix out(M.rows(), static_cast<Eigen::Index>(perm.size()));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = M.col(perm[i]);
  }
  return out;
}

// Water-filled criterion value for a fixed gain ordering:
// n - m + (sum_{i<=m} 1/sqrt(gamma_i))^2 / (budget + sum_{i<=m} 1/gamma_i).
double ordering_objective(const std::vector<double>& gammas, int m,
                          double budget) {
  double s_half = 0.0;
  double s_inv = 0.0;
  for (int i = 0; i < m; ++i) {
    s_half += std::sqrt(1.0 / gammas[static_cast<std::size_t>(i)]);
    s_inv += 1.0 / gammas[static_cast<std::size_t>(i)];
  }
  double n = static_cast<double>(gammas.size());
  return n - m + s_half * s_half / (budget + s_inv);
}

}  // namespace

TrainingMatrix make_training(CMatrix P) {
  TrainingMatrix out;
  out.energy = P.squaredNorm();
  out.P = std::move(P);
  return out;
}

GuaranteedSpec guaranteed_spec(double gamma, double alpha, int n_t, int n_r) {
  if (!(gamma > 0.0)) {
    throw DimensionError("accuracy weight gamma must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DimensionError("confidence level must lie in (0, 1)");
  }
  if (n_t < 1 || n_r < 1) {
    throw DimensionError("antenna counts must be positive");
  }
  GuaranteedSpec spec;
  spec.gamma = gamma;
  spec.alpha = alpha;
  spec.c = gamma * chi2_quantile(alpha, 2 * n_t * n_r) / 2.0;
  return spec;
}

double guaranteed_constant(double gamma, double alpha, int n_t, int n_r) {
  return guaranteed_spec(gamma, alpha, n_t, n_r).c;
}

TrainingMatrix solve_min_energy(const CMatrix& A, const CMatrix& B) {
  require_square(A, "A");
  require_square(B, "B");
  const Eigen::Index N = A.rows();
  const Eigen::Index n = B.rows();

  HermEig ea = herm_eig(A, EigOrder::Ascending);
  if (ea.d(0) <= tol_scale(1e-12, ea.d.cwiseAbs().maxCoeff())) {
    throw RankError("A must be positive definite");
  }

  HermEig eb = herm_eig(B, EigOrder::Descending);
  double bmax = eb.d.cwiseAbs().maxCoeff();
  if (eb.d.minCoeff() < -tol_scale(1e-10, bmax)) {
    throw DimensionError("B must be positive semidefinite");
  }
  RVector db = eb.d.cwiseMax(0.0);
  double clamp = 1e-12 * bmax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (db(i) > clamp) {
      ++rank;
    } else {
      db(i) = 0.0;
    }
  }
  if (rank > N) {
    throw InfeasibleError(
        "constraint P A^{-1} P^H >= B is infeasible: rank(B) = " +
        std::to_string(rank) + " exceeds the training length N = " +
        std::to_string(N));
  }

  CMatrix D = CMatrix::Zero(n, N);
  const Eigen::Index m = std::min(n, N);
  for (Eigen::Index i = 0; i < m; ++i) {
    D(i, i) = std::sqrt(ea.d(i) * db(i));
  }
  return make_training(eb.U * D * ea.U.adjoint());
}

TrainingMatrix solve_adgpp(const CMatrix& S_Q, const CMatrix& S_R,
                           const Admissibility& adm, double c) {
  if (!(c > 0.0)) {
    throw DimensionError("constraint scale c must be positive");
  }
  CMatrix sr_half = herm_sqrt(S_R);
  double lam = std::max(0.0, lambda_max_herm(sr_half * adm.I_R * sr_half));
  CMatrix Bmat = c * lam * adm.I_T;
  return solve_min_energy(S_Q, 0.5 * (Bmat + Bmat.adjoint()));
}

AsgppDesign solve_asgpp(const CMatrix& S_Q, const CMatrix& S_R,
                        const CMatrix& R_T, const CMatrix& R_R,
                        const Admissibility& adm, double c, AsgppCase which) {
  if (!(c > 0.0)) {
    throw DimensionError("constraint scale c must be positive");
  }
  require_square(R_T, "R_T");
  require_square(R_R, "R_R");
  const Eigen::Index n_t = R_T.rows();
  CMatrix eye_t = CMatrix::Identity(n_t, n_t);
  CMatrix eye_r = CMatrix::Identity(R_R.rows(), R_R.cols());
  CMatrix rt_inv = Eigen::LLT<CMatrix>(R_T).solve(eye_t);
  CMatrix sr_half = herm_sqrt(S_R);

  CMatrix Bmat;
  switch (which) {
    case AsgppCase::RReqSR: {
      require_close(R_R, S_R, "case RReqSR: R_R == S_R");
      double lam =
          std::max(0.0, lambda_max_herm(sr_half * adm.I_R * sr_half));
      Bmat = positive_part(c * lam * adm.I_T - rt_inv);
      break;
    }
    case AsgppCase::RRinvEqIR: {
      CMatrix rr_inv = Eigen::LLT<CMatrix>(R_R).solve(eye_r);
      require_close(adm.I_R, rr_inv, "case RRinvEqIR: I_R == R_R^{-1}");
      double lam =
          std::max(0.0, lambda_max_herm(sr_half * adm.I_R * sr_half));
      Bmat = lam * positive_part(c * adm.I_T - rt_inv);
      break;
    }
    case AsgppCase::RTinvEqIT: {
      require_close(adm.I_T, rt_inv, "case RTinvEqIT: I_T == R_T^{-1}");
      CMatrix rr_inv = Eigen::LLT<CMatrix>(R_R).solve(eye_r);
      CMatrix bracket = positive_part(c * adm.I_R - rr_inv);
      double lam = 0.0;
      if (bracket.norm() > 0.0) {
        lam = std::max(0.0, lambda_max_herm(sr_half * bracket * sr_half));
      }
      Bmat = lam * adm.I_T;
      break;
    }
  }

  Bmat = 0.5 * (Bmat + Bmat.adjoint()).eval();
  AsgppDesign out;
  out.prior_sufficient = (Bmat.norm() == 0.0);
  out.train = solve_min_energy(S_Q, Bmat);
  return out;
}

TrainingMatrix solve_avg_mvu(const CMatrix& I_T, const CMatrix& S_Q,
                             double budget) {
  require_square(I_T, "I_T");
  require_square(S_Q, "S_Q");
  if (!(budget > 0.0)) {
    throw DimensionError("training energy budget must be positive");
  }
  const Eigen::Index n_t = I_T.rows();
  const Eigen::Index B = S_Q.rows();
  if (B < n_t) {
    throw InfeasibleError(
        "unbiased estimation needs a training length of at least n_T = " +
        std::to_string(n_t) + ", got B = " + std::to_string(B));
  }

  HermEig et = herm_eig(I_T.transpose(), EigOrder::Descending);
  if (et.d.minCoeff() <= tol_scale(1e-12, et.d.cwiseAbs().maxCoeff())) {
    throw RankError(
        "transmit weight must be positive definite for a finite average "
        "criterion");
  }
  HermEig eq = herm_eig(S_Q.transpose(), EigOrder::Ascending);
  if (eq.d(0) <= tol_scale(1e-12, eq.d.cwiseAbs().maxCoeff())) {
    throw RankError("temporal noise covariance must be positive definite");
  }

  RVector alpha(n_t);
  for (Eigen::Index i = 0; i < n_t; ++i) {
    alpha(i) = et.d(i) * eq.d(i);
  }
  double s = alpha.cwiseSqrt().sum();

  CMatrix D = CMatrix::Zero(n_t, B);
  for (Eigen::Index i = 0; i < n_t; ++i) {
    D(i, i) = std::sqrt(budget * std::sqrt(alpha(i)) / s);
  }
  return make_training((et.U * D * eq.U.adjoint()).conjugate());
}

double avg_mvu_objective(const CMatrix& I_T, const CMatrix& I_R,
                         const CMatrix& S_Q, const CMatrix& S_R,
                         double budget) {
  HermEig et = herm_eig(I_T.transpose(), EigOrder::Descending);
  HermEig eq = herm_eig(S_Q.transpose(), EigOrder::Ascending);
  double s = 0.0;
  for (Eigen::Index i = 0; i < et.d.size(); ++i) {
    s += std::sqrt(et.d(i) * eq.d(i));
  }
  return (I_R * S_R).trace().real() * s * s / budget;
}

int mstar(const std::vector<double>& gammas, double budget) {
  if (!(budget > 0.0)) {
    throw DimensionError("training energy budget must be positive");
  }
  const int K = static_cast<int>(gammas.size());
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DimensionError("water-filling gains must be positive and finite");
    }
  }
  int best = 0;
  double s_half = 0.0;
  double s_inv = 0.0;
  for (int m = 1; m <= K; ++m) {
    s_half += std::sqrt(1.0 / gammas[static_cast<std::size_t>(m - 1)]);
    s_inv += 1.0 / gammas[static_cast<std::size_t>(m - 1)];
    bool ok = true;
    for (int k = 1; k <= m; ++k) {
      double lhs =
          std::sqrt(1.0 / gammas[static_cast<std::size_t>(k - 1)]) * s_half -
          s_inv;
      if (!(lhs < budget)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      best = m;
    }
  }
  return best;
}

OrderingResult optimal_ordering_exhaustive(const std::vector<double>& Lambda_T,
                                           const std::vector<double>& Lambda_Q,
                                           double budget) {
  const int n = static_cast<int>(Lambda_T.size());
  const int B = static_cast<int>(Lambda_Q.size());
  if (n < 1 || B < n) {
    throw InfeasibleError(
        "ordering search needs at least as many temporal modes as transmit "
        "dimensions");
  }
  double pairs = 1.0;
  for (int i = 2; i <= n; ++i) pairs *= i;
  for (int i = 2; i <= B; ++i) pairs *= i;
  if (pairs > 1e6) {
    throw InfeasibleError(
        "ordering search space of " + std::to_string(pairs) +
        " permutation pairs exceeds the 1e6 guard; use heuristic_ordering");
  }

  std::vector<int> idx_t(static_cast<std::size_t>(n));
  std::iota(idx_t.begin(), idx_t.end(), 0);
  OrderingResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.m_star = 0;
  std::vector<double> gammas(static_cast<std::size_t>(n));
  do {
    std::vector<int> idx_q(static_cast<std::size_t>(B));
    std::iota(idx_q.begin(), idx_q.end(), 0);
    do {
      for (int i = 0; i < n; ++i) {
        gammas[static_cast<std::size_t>(i)] =
            Lambda_T[static_cast<std::size_t>(idx_t[static_cast<std::size_t>(
                i)])] /
            Lambda_Q[static_cast<std::size_t>(idx_q[static_cast<std::size_t>(
                i)])];
      }
      int m = mstar(gammas, budget);
      double J = ordering_objective(gammas, m, budget);
      if (J < best.objective) {
        best.objective = J;
        best.m_star = m;
        best.perm_T = idx_t;
        best.perm_Q = idx_q;
      }
    } while (std::next_permutation(idx_q.begin(), idx_q.end()));
  } while (std::next_permutation(idx_t.begin(), idx_t.end()));
  return best;
}

OrderingResult heuristic_ordering(const std::vector<double>& Lambda_T,
                                  const std::vector<double>& Lambda_Q,
                                  double budget) {
  const int n = static_cast<int>(Lambda_T.size());
  const int B = static_cast<int>(Lambda_Q.size());
  if (n < 1 || B < n) {
    throw InfeasibleError(
        "ordering search needs at least as many temporal modes as transmit "
        "dimensions");
  }
  OrderingResult out;
  out.perm_T.resize(static_cast<std::size_t>(n));
  out.perm_Q.resize(static_cast<std::size_t>(B));
  std::iota(out.perm_T.begin(), out.perm_T.end(), 0);
  std::iota(out.perm_Q.begin(), out.perm_Q.end(), 0);
  std::stable_sort(out.perm_T.begin(), out.perm_T.end(), [&](int a, int b) {
    return Lambda_T[static_cast<std::size_t>(a)] >
           Lambda_T[static_cast<std::size_t>(b)];
  });
  std::stable_sort(out.perm_Q.begin(), out.perm_Q.end(), [&](int a, int b) {
    return Lambda_Q[static_cast<std::size_t>(a)] <
           Lambda_Q[static_cast<std::size_t>(b)];
  });

  std::vector<double> gammas(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    gammas[static_cast<std::size_t>(i)] =
        Lambda_T[static_cast<std::size_t>(out.perm_T[static_cast<std::size_t>(
            i)])] /
        Lambda_Q[static_cast<std::size_t>(out.perm_Q[static_cast<std::size_t>(
            i)])];
  }
  // With this pairing the water-filling thresholds increase along i, so
  // positivity of the last active direction implies positivity of all of
  // them and the all-k check collapses to k = m.
  int best = 0;
  double s_half = 0.0;
  double s_inv = 0.0;
  for (int m = 1; m <= n; ++m) {
    s_half += std::sqrt(1.0 / gammas[static_cast<std::size_t>(m - 1)]);
    s_inv += 1.0 / gammas[static_cast<std::size_t>(m - 1)];
    double lhs =
        std::sqrt(1.0 / gammas[static_cast<std::size_t>(m - 1)]) * s_half -
        s_inv;
    if (lhs < budget) {
      best = m;
    }
  }
  out.m_star = best;
  out.objective = ordering_objective(gammas, best, budget);
  return out;
}

TrainingMatrix solve_avg_mmse(const CMatrix& R_T, const CMatrix& R_R,
                              const CMatrix& S_Q, const CMatrix& S_R,
                              const Admissibility& adm, double budget,
                              AvgMmseMode mode) {
  require_square(R_T, "R_T");
  require_square(R_R, "R_R");
  require_square(S_Q, "S_Q");
  if (!(budget > 0.0)) {
    throw DimensionError("training energy budget must be positive");
  }
  const Eigen::Index n_t = R_T.rows();
  const Eigen::Index B = S_Q.rows();
  if (B < n_t) {
    throw InfeasibleError(
        "closed-form average design needs a training length of at least "
        "n_T = " +
        std::to_string(n_t) + ", got B = " + std::to_string(B));
  }
  require_close(R_R, S_R,
                "average design closed form: R_R == S_R (matched receive "
                "factors)");

  HermEig et = herm_eig(R_T.transpose(), EigOrder::Descending);
  if (et.d.minCoeff() <= tol_scale(1e-12, et.d.cwiseAbs().maxCoeff())) {
    throw RankError("transmit prior covariance must be positive definite");
  }
  HermEig eq = herm_eig(S_Q.transpose(), EigOrder::Ascending);
  if (eq.d(0) <= tol_scale(1e-12, eq.d.cwiseAbs().maxCoeff())) {
    throw RankError("temporal noise covariance must be positive definite");
  }

  CMatrix D = CMatrix::Zero(n_t, B);
  CMatrix P;

  if (mode == AvgMmseMode::IdentityWeight) {
    double c0 = adm.I_T.trace().real() / static_cast<double>(n_t);
    CMatrix eye_t = CMatrix::Identity(n_t, n_t);
    if (!(c0 > 0.0) ||
        (adm.I_T - c0 * eye_t).norm() > tol_scale(1e-9, std::abs(c0))) {
      throw DimensionError(
          "mode IdentityWeight requires I_T to be a positive multiple of "
          "the identity");
    }
    // Pair the largest prior gains with the quietest training slots; the
    // water level nu then solves sum_i max(0, nu sqrt(lq_i) - lq_i/lt_i)
    // = budget with thresholds sqrt(lq_i)/lt_i increasing along i.
    int m = static_cast<int>(n_t);
    double nu = 0.0;
    for (; m >= 1; --m) {
      double a = 0.0;
      double c = 0.0;
      for (int i = 0; i < m; ++i) {
        a += std::sqrt(eq.d(i));
        c += eq.d(i) / et.d(i);
      }
      nu = (budget + c) / a;
      double threshold = std::sqrt(eq.d(m - 1)) / et.d(m - 1);
      if (nu > threshold) {
        break;
      }
    }
    if (m < 1) {
      throw InfeasibleError(
          "water-filling found no direction with positive power; the "
          "energy budget is too small");
    }
    for (int i = 0; i < m; ++i) {
      double kappa = nu * std::sqrt(eq.d(i)) - eq.d(i) / et.d(i);
      D(i, i) = std::sqrt(std::max(0.0, kappa));
    }
    P = (et.U * D * eq.U.adjoint()).conjugate();
  } else {
    CMatrix eye_t = CMatrix::Identity(n_t, n_t);
    CMatrix rt_inv = Eigen::LLT<CMatrix>(R_T).solve(eye_t);
    require_close(adm.I_T, rt_inv,
                  "mode PriorInverseWeight: I_T == R_T^{-1}");

    std::vector<double> lt(static_cast<std::size_t>(n_t));
    std::vector<double> lq(static_cast<std::size_t>(B));
    for (Eigen::Index i = 0; i < n_t; ++i) lt[static_cast<std::size_t>(i)] = et.d(i);
    for (Eigen::Index i = 0; i < B; ++i) lq[static_cast<std::size_t>(i)] = eq.d(i);

    double pairs = 1.0;
    for (Eigen::Index i = 2; i <= n_t; ++i) pairs *= static_cast<double>(i);
    for (Eigen::Index i = 2; i <= B; ++i) pairs *= static_cast<double>(i);
    OrderingResult ord;
    if (pairs <= 1e6) {
      ord = optimal_ordering_exhaustive(lt, lq, budget);
    } else {
      std::cerr << "traindesign: ordering search space of " << pairs
                << " permutation pairs exceeds the 1e6 guard; using the "
                   "heuristic pairing\n";
      ord = heuristic_ordering(lt, lq, budget);
    }

    std::vector<double> gammas(static_cast<std::size_t>(n_t));
    for (Eigen::Index i = 0; i < n_t; ++i) {
      gammas[static_cast<std::size_t>(i)] =
          lt[static_cast<std::size_t>(
              ord.perm_T[static_cast<std::size_t>(i)])] /
          lq[static_cast<std::size_t>(
              ord.perm_Q[static_cast<std::size_t>(i)])];
    }
    double s_half = 0.0;
    double s_inv = 0.0;
    for (int i = 0; i < ord.m_star; ++i) {
      s_half += std::sqrt(1.0 / gammas[static_cast<std::size_t>(i)]);
      s_inv += 1.0 / gammas[static_cast<std::size_t>(i)];
    }
    double nu = (budget + s_inv) / s_half;
    for (int i = 0; i < ord.m_star; ++i) {
      double inv_g = 1.0 / gammas[static_cast<std::size_t>(i)];
      double kappa = nu * std::sqrt(inv_g) - inv_g;
      D(i, i) = std::sqrt(std::max(0.0, kappa));
    }
    P = (permute_cols(et.U, ord.perm_T) * D *
         permute_cols(eq.U, ord.perm_Q).adjoint())
            .conjugate();
  }
  return make_training(std::move(P));
}

TrainingMatrix white_training(Eigen::Index n_t, Eigen::Index B,
                              double energy) {
  if (n_t < 1 || B < n_t) {
    throw InfeasibleError(
        "white training needs a training length of at least n_T");
  }
  if (!(energy >= 0.0)) {
    throw DimensionError("training energy must be nonnegative");
  }
  CMatrix P = CMatrix::Zero(n_t, B);
  P.leftCols(n_t) = std::sqrt(energy / static_cast<double>(n_t)) *
                    CMatrix::Identity(n_t, n_t);
  return make_training(std::move(P));
}

TrainingMatrix equalize_energy(const TrainingMatrix& P_ref,
                               const TrainingMatrix& P) {
  double own = P.P.squaredNorm();
  if (!(own > 0.0)) {
    throw InfeasibleError("cannot rescale an all-zero training matrix");
  }
  double target = P_ref.P.squaredNorm();
  return make_training(std::sqrt(target / own) * P.P);
}

}  // namespace traindesign
