#include "traindesign/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace traindesign {

namespace {

void require_square(const CMatrix& M, const char* who) {
  if (M.rows() != M.cols())
    throw DimensionError(std::string(who) + ": matrix must be square, got " +
                         std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
}

void require_hermitian(const CMatrix& M, const char* who) {
  require_square(M, who);
  const double dev = (M - M.adjoint()).norm();
  if (dev > tol_scale(1e-10, M.norm()))
    throw DimensionError(std::string(who) + ": matrix is not Hermitian (deviation " +
                         std::to_string(dev) + ")");
}

// First entry of a column whose magnitude exceeds a small fraction of the
// column norm; -1 for an (effectively) zero column.
Eigen::Index first_nonzero(const CVector& col) {
  const double thr = 1e-12 * std::max(1.0, col.norm());
  for (Eigen::Index i = 0; i < col.size(); ++i)
    if (std::abs(col(i)) > thr) return i;
  return -1;
}

void fix_column_phase(CMatrix& U, Eigen::Index j) {
  const Eigen::Index i = first_nonzero(U.col(j));
  if (i < 0) return;
  const cplx z = U(i, j);
  U.col(j) *= std::conj(z) / std::abs(z);
}

}  // namespace

HermEig herm_eig(const CMatrix& M, EigOrder order) {
  require_hermitian(M, "herm_eig");
  const CMatrix H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success)
    throw RankError("herm_eig: eigensolver failed to converge");

  const Eigen::Index n = H.rows();
  RVector d = es.eigenvalues();  // ascending
  CMatrix U = es.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) fix_column_phase(U, j);

  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (order == EigOrder::Descending)
    std::reverse(idx.begin(), idx.end());

  // Ties resolved by descending magnitude of the first nonzero component,
  // so repeated eigenvalues still yield a reproducible column order.
  const double tie_tol = tol_scale(1e-10, d.size() ? d.cwiseAbs().maxCoeff() : 0.0);
  auto lead_mag = [&](Eigen::Index j) {
    const Eigen::Index i = first_nonzero(U.col(j));
    return i < 0 ? 0.0 : std::abs(U(i, j));
  };
  for (size_t lo_i = 0; lo_i < idx.size();) {
    size_t hi_i = lo_i + 1;
    while (hi_i < idx.size() &&
           std::abs(d(idx[hi_i]) - d(idx[hi_i - 1])) <= tie_tol)
      ++hi_i;
    std::stable_sort(idx.begin() + lo_i, idx.begin() + hi_i,
                     [&](Eigen::Index a, Eigen::Index b) {
                       return lead_mag(a) > lead_mag(b);
                     });
    lo_i = hi_i;
  }

  HermEig out;
  out.d.resize(n);
  out.U.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.d(j) = d(idx[static_cast<size_t>(j)]);
    out.U.col(j) = U.col(idx[static_cast<size_t>(j)]);
  }
  return out;
}

Svd svd(const CMatrix& M) {
  Eigen::JacobiSVD<CMatrix> solver(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd out;
  out.U = solver.matrixU();
  out.sigma = solver.singularValues();
  out.V = solver.matrixV();
  return out;
}

CMatrix kron(const CMatrix& A, const CMatrix& B) {
  CMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

CVector vec(const CMatrix& M) {
  return CVector(Eigen::Map<const CVector>(M.data(), M.size()));
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw DimensionError("unvec: length " + std::to_string(v.size()) +
                         " does not factor as " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  return CMatrix(Eigen::Map<const CMatrix>(v.data(), rows, cols));
}

Eigen::MatrixXd commutation_matrix(Eigen::Index m, Eigen::Index n) {
  if (m <= 0 || n <= 0)
    throw DimensionError("commutation_matrix: dimensions must be positive");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      K(i * n + j, j * m + i) = 1.0;  // vec(M^T) picks M(i,j) from slot (j,i)
  return K;
}

CMatrix positive_part(const CMatrix& M) {
  HermEig e = herm_eig(M);
  const double clamp = 1e-12 * (e.d.size() ? e.d.cwiseAbs().maxCoeff() : 0.0);
  RVector dp = e.d.unaryExpr([clamp](double x) { return x > clamp ? x : 0.0; });
  return e.U * dp.asDiagonal() * e.U.adjoint();
}

CMatrix herm_sqrt(const CMatrix& M) {
  HermEig e = herm_eig(M);
  const double floor = -tol_scale(1e-10, e.d.size() ? e.d.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < e.d.size(); ++i) {
    if (e.d(i) < floor)
      throw RankError("herm_sqrt: matrix has negative eigenvalue " +
                      std::to_string(e.d(i)));
  }
  RVector r = e.d.unaryExpr([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
  return e.U * r.asDiagonal() * e.U.adjoint();
}

CMatrix pinv(const CMatrix& M, double rtol) {
  Svd s = svd(M);
  const double cutoff = rtol * (s.sigma.size() ? s.sigma(0) : 0.0);
  RVector inv = s.sigma.unaryExpr(
      [cutoff](double x) { return x > cutoff ? 1.0 / x : 0.0; });
  return s.V * inv.asDiagonal() * s.U.adjoint();
}

double min_eig_herm(const CMatrix& M) {
  require_hermitian(M, "min_eig_herm");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const CMatrix& M, double tol) {
  require_hermitian(M, "is_psd");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()),
                                            Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double amax = es.eigenvalues().cwiseAbs().maxCoeff();
  return lo >= -tol * std::max(1.0, amax);
}

namespace {

// Series expansion of P(a,x), effective for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) = 1 - P(a,x), effective for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0) throw DimensionError("gamma_p: shape must be positive");
  if (x < 0.0) throw DimensionError("gamma_p: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi2_quantile(double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DimensionError("chi2_quantile: alpha must lie in (0,1)");
  if (k < 1) throw DimensionError("chi2_quantile: degrees of freedom must be >= 1");

  const double a = 0.5 * k;
  auto cdf = [a](double x) { return gamma_p(a, 0.5 * x); };
  auto pdf = [a](double x) {
    return 0.5 * std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a));
  };

  double lo = 0.0, hi = std::max(4.0 * k, 16.0);
  while (cdf(hi) < alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12)
      throw RankError("chi2_quantile: failed to bracket quantile");
  }

  // Newton steps, falling back to bisection whenever a step leaves the
  // bracket or stalls; target |CDF - alpha| < 1e-12, at most 200 iterations.
  double x = std::max(static_cast<double>(k), 1e-3);
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(x) - alpha;
    if (std::abs(f) < 1e-12) return x;
    if (f > 0.0) hi = x; else lo = x;
    const double slope = pdf(x);
    double next = slope > 0.0 ? x - f / slope : -1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace traindesign
