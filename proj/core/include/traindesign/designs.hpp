#ifndef TRAINDESIGN_DESIGNS_HPP
#define TRAINDESIGN_DESIGNS_HPP

#include <vector>

#include "traindesign/admissibility.hpp"
#include "traindesign/types.hpp"

namespace traindesign {

struct TrainingMatrix {
  CMatrix P;      // n_T x B
  double energy;  // tr(P P^H)
};

TrainingMatrix make_training(CMatrix P);

// Accuracy target of the guaranteed designs: the error quadratic form is
// kept below 1/gamma with confidence alpha, which pins the constraint
// scale c = gamma * chi2_quantile(alpha, 2 n_T n_R) / 2.
struct GuaranteedSpec {
  double gamma;
  double alpha;
  double c;
};

GuaranteedSpec guaranteed_spec(double gamma, double alpha, int n_t, int n_r);
double guaranteed_constant(double gamma, double alpha, int n_t, int n_r);

// Minimum-energy P with P A^{-1} P^H >= B (A Hermitian PD N x N,
// B Hermitian PSD n x n, feasible when N >= rank(B)):
// P = U_B D_P U_A^H with the eigenvalues of A ascending, those of B
// descending, and (D_P)_ii = sqrt(dA_i dB_i).
TrainingMatrix solve_min_energy(const CMatrix& A, const CMatrix& B);

// Guaranteed design ignoring the channel prior: delegates to
// solve_min_energy(S_Q, c lambda_max(S_R I_R) I_T).
TrainingMatrix solve_adgpp(const CMatrix& S_Q, const CMatrix& S_R,
                           const Admissibility& adm, double c);

// Closed-form family of the prior-aware guaranteed design. The caller
// selects which structural assumption applies; it is validated, never
// inferred.
enum class AsgppCase {
  RReqSR,      // R_R == S_R
  RRinvEqIR,   // I_R == R_R^{-1}
  RTinvEqIT,   // I_T == R_T^{-1}
};

struct AsgppDesign {
  TrainingMatrix train;
  // True when the prior alone already meets the accuracy target (the
  // effective requirement matrix is zero): P = 0 and no error is raised.
  bool prior_sufficient;
};

AsgppDesign solve_asgpp(const CMatrix& S_Q, const CMatrix& S_R,
                        const CMatrix& R_T, const CMatrix& R_R,
                        const Admissibility& adm, double c, AsgppCase which);

// Minimum average weighted error of the unbiased estimator under a
// training energy budget; spends the budget exactly.
TrainingMatrix solve_avg_mvu(const CMatrix& I_T, const CMatrix& S_Q,
                             double budget);

// Closed-form value of the criterion attained by solve_avg_mvu:
// tr(I_R S_R) (sum_i sqrt(alpha_i))^2 / budget.
double avg_mvu_objective(const CMatrix& I_T, const CMatrix& I_R,
                         const CMatrix& S_Q, const CMatrix& S_R,
                         double budget);

// Number of directions that receive positive power when water-filling
// against inverse gains gamma_i (in the given order): the largest m with
// sqrt(1/gamma_k) sum_{i<=m} sqrt(1/gamma_i) - sum_{i<=m} 1/gamma_i < budget
// for every k <= m; 0 if no m qualifies.
int mstar(const std::vector<double>& gammas, double budget);

// Eigenvalue-ordering search for the water-filled Bayesian design.
struct OrderingResult {
  std::vector<int> perm_T;  // position i uses Lambda_T[perm_T[i]]
  std::vector<int> perm_Q;  // position i uses Lambda_Q[perm_Q[i]]
  double objective;
  int m_star;
};

// Exhaustive search over all permutation pairs (guarded at 10^6 pairs);
// ties resolved toward the lexicographically smallest pair.
OrderingResult optimal_ordering_exhaustive(const std::vector<double>& Lambda_T,
                                           const std::vector<double>& Lambda_Q,
                                           double budget);

// Decreasing transmit / increasing temporal eigenvalue pairing with the
// simplified active-count rule.
OrderingResult heuristic_ordering(const std::vector<double>& Lambda_T,
                                  const std::vector<double>& Lambda_Q,
                                  double budget);

// Bayesian average design; closed forms exist for the matched receive
// factors R_R == S_R and the two transmit-weight families below.
enum class AvgMmseMode {
  IdentityWeight,      // I_T proportional to the identity
  PriorInverseWeight,  // I_T equal to R_T^{-1}
};

TrainingMatrix solve_avg_mmse(const CMatrix& R_T, const CMatrix& R_R,
                              const CMatrix& S_Q, const CMatrix& S_R,
                              const Admissibility& adm, double budget,
                              AvgMmseMode mode);

// Equal singular values, orthogonal rows: P P^H = (energy/n_T) I.
TrainingMatrix white_training(Eigen::Index n_t, Eigen::Index B, double energy);

// Rescale P to the reference energy, preserving its singular structure.
TrainingMatrix equalize_energy(const TrainingMatrix& P_ref,
                               const TrainingMatrix& P);

}  // namespace traindesign

#endif
