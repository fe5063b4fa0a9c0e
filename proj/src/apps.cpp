#include "twodevp/apps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "twodevp/eigencurve.hpp"
#include "twodevp/solver.hpp"

namespace twodevp {

void AppOptions::validate() const {
  if (grid_points < 3) throw Error(Errc::invalid_options, "grid_points must be at least 3");
  if (!(refine_tol > 0.0)) throw Error(Errc::invalid_options, "refine_tol must be positive");
  if (max_bisect < 1) throw Error(Errc::invalid_options, "max_bisect must be positive");
  if (threads < 0) throw Error(Errc::invalid_options, "threads must be non-negative");
  tol.validate();
}

const char* to_string(MinimaxCase c) noexcept {
  switch (c) {
    case MinimaxCase::caseA: return "caseA";
    case MinimaxCase::caseB: return "caseB";
    case MinimaxCase::caseGeneral: return "caseGeneral";
  }
  return "unknown";
}

namespace {

SolveOptions refine_options(const AppOptions& opts) {
  SolveOptions so;
  so.refine_tol = opts.refine_tol;
  so.max_bisect = opts.max_bisect;
  so.threads = opts.threads;
  return so;
}

// If the minimal eigenspace X of `m` contains x with rho_other(x) <= lambda_min(m),
// returns that x. The test is lambda_min(X^H other X) <= lambda_min(m).
std::optional<CVector> extreme_case(const HermitianMatrix& m, const HermitianMatrix& other,
                                    const Tolerances& tol, double scale) {
  const SpectralDecomposition dec = eigh_desc(m);
  const Index n = m.dim();
  const double lmin = dec.eigenvalues(n - 1);
  const double gap = tol.cluster_tol * (1.0 + scale);
  Index first = n - 1;
  while (first > 0 && dec.eigenvalues(first - 1) - lmin <= gap) --first;
  const CMatrix x = dec.eigenvectors.middleCols(first, n - first);
  CMatrix proj = x.adjoint() * other.matrix() * x;
  proj = 0.5 * (proj + proj.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(proj);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::eig_solver_failure, "projected eigenproblem did not converge");
  }
  if (es.eigenvalues()(0) > lmin + tol.eig_tol * (1.0 + scale)) return std::nullopt;
  CVector v = x * es.eigenvectors().col(0);
  return CVector(v / v.norm());
}

}  // namespace

MinimaxResult qcqp_minimax(const HermitianMatrix& a, const HermitianMatrix& b, const AppOptions& opts) {
  opts.validate();
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "A is " << a.dim() << "x" << a.dim() << " but B is " << b.dim() << "x" << b.dim();
    throw Error(Errc::dimension_mismatch, os.str());
  }
  const double scale = std::max(spectral_norm(a), spectral_norm(b));

  MinimaxResult res;
  if (auto x = extreme_case(a, b, opts.tol, scale)) {
    res.kind = MinimaxCase::caseA;
    res.x_opt = *x;
    res.value = eigvalsh_desc(a)(a.dim() - 1);
    return res;
  }
  if (auto x = extreme_case(b, a, opts.tol, scale)) {
    res.kind = MinimaxCase::caseB;
    res.x_opt = *x;
    res.value = eigvalsh_desc(b)(b.dim() - 1);
    return res;
  }

  const HermitianPair pair = validate_pair(a.matrix(), a.matrix() - b.matrix(), opts.tol);
  const Index last = pair.dim() - 1;

  // lambda_n((1 - mu) A + mu B) is concave and, outside the two extreme
  // cases, increasing at 0 and decreasing at 1.
  const double mu = detail::bisect_slope(pair, last, 0.0, 1.0, 1, refine_options(opts));
  const TwoDEigentriple t = triple_at(pair, mu, last);
  res.kind = MinimaxCase::caseGeneral;
  res.mu_opt = mu;
  res.x_opt = t.x;
  res.value = eigvalsh_desc(pencil_eval(pair, mu))(last);

  const auto boundary = [&](double at) {
    const DegenerateCluster cl = cluster_around(pair, at, eigh_desc(pencil_eval(pair, at)), last);
    return std::pair{one_sided_derivatives(cl), cl.k - 1};
  };
  const auto [d0, j0] = boundary(0.0);
  const auto [d1, j1] = boundary(1.0);
  res.left_slope_at_0 = d0.left(j0);
  res.right_slope_at_1 = d1.right(j1);
  return res;
}

std::pair<HermitianMatrix, HermitianMatrix> qcqp_from_constraints(const HermitianMatrix& t,
                                                                  const HermitianMatrix& p1,
                                                                  const HermitianMatrix& p2,
                                                                  const Tolerances& tol) {
  if (t.dim() != p1.dim() || t.dim() != p2.dim()) {
    throw Error(Errc::dimension_mismatch, "T, P1 and P2 must have the same size");
  }
  const SpectralDecomposition dec = eigh_desc(t);
  const double floor = tol.indef_tol * std::max(1.0, spectral_norm(t));
  if (dec.eigenvalues.minCoeff() <= floor) {
    std::ostringstream os;
    os << "T has eigenvalue " << dec.eigenvalues.minCoeff() << " <= " << floor;
    throw Error(Errc::not_positive_definite, os.str());
  }
  const RVector inv_sqrt = dec.eigenvalues.cwiseSqrt().cwiseInverse();
  const CMatrix s = dec.eigenvectors * inv_sqrt.cast<Complex>().asDiagonal() * dec.eigenvectors.adjoint();
  return {HermitianMatrix::from(s * p1.matrix() * s, tol), HermitianMatrix::from(s * p2.matrix() * s, tol)};
}

HermitianPair stability_pair(const CMatrix& ahat, const Tolerances& tol) {
  if (ahat.rows() != ahat.cols() || ahat.rows() == 0) {
    throw Error(Errc::dimension_mismatch, "Ahat must be square and non-empty");
  }
  if (!ahat.allFinite()) throw Error(Errc::non_finite_parameter, "Ahat has non-finite entries");
  const Index m = ahat.rows();
  CMatrix a = CMatrix::Zero(2 * m, 2 * m);
  a.topRightCorner(m, m) = ahat;
  a.bottomLeftCorner(m, m) = ahat.adjoint();
  CMatrix c = CMatrix::Zero(2 * m, 2 * m);
  c.topRightCorner(m, m) = Complex(0.0, 1.0) * CMatrix::Identity(m, m);
  c.bottomLeftCorner(m, m) = Complex(0.0, -1.0) * CMatrix::Identity(m, m);
  return validate_pair(a, c, tol);
}

StabilityResult distance_to_instability(const CMatrix& ahat, const AppOptions& opts) {
  opts.validate();
  const HermitianPair pair = stability_pair(ahat, opts.tol);

  Eigen::ComplexEigenSolver<CMatrix> ces(ahat, false);
  if (ces.info() != Eigen::Success) throw Error(Errc::eig_solver_failure, "eigenvalues of Ahat did not converge");
  const double margin = ces.eigenvalues().real().maxCoeff();
  if (!(margin < -opts.tol.zero_tol)) {
    std::ostringstream os;
    os << "largest real part of an eigenvalue is " << margin;
    throw Error(Errc::not_stable, os.str());
  }

  const Index idx = ahat.rows() - 1;
  const double r = pair.a_norm();
  const int count = opts.grid_points;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = -r + 2.0 * r * k / (count - 1);
  grid.back() = r;
  const std::vector<CurveSample> samples = sample_curves(pair, grid, opts.threads);
  auto value = [&](int k) { return samples[static_cast<std::size_t>(k)].lambdas(idx); };
  auto curve = [&](double mu) { return eigvalsh_desc(pencil_eval(pair, mu))(idx); };
  const SolveOptions so = refine_options(opts);

  StabilityResult res;
  for (int k = 0; k < count; ++k) {
    const bool below_left = k == 0 || value(k - 1) > value(k);
    const bool below_right = k + 1 == count || value(k + 1) >= value(k);
    if (!(below_left && below_right)) continue;
    double mu = grid[static_cast<std::size_t>(k)];
    if (k > 0 && k + 1 < count) {
      const double lo = grid[static_cast<std::size_t>(k - 1)];
      const double hi = grid[static_cast<std::size_t>(k + 1)];
      const int s_lo = detail::slope_sign(pair, lo, idx);
      const int s_hi = detail::slope_sign(pair, hi, idx);
      mu = (s_lo < 0 && s_hi > 0) ? detail::bisect_slope(pair, idx, lo, hi, s_lo, so)
                                  : detail::golden_minimize(curve, lo, hi, opts.refine_tol, opts.max_bisect);
    }
    res.local_minima.push_back({mu, curve(mu)});
  }

  const auto best = std::min_element(res.local_minima.begin(), res.local_minima.end(),
                                     [](const auto& l, const auto& r) { return l.value < r.value; });
  res.mu_opt = best->mu;
  res.beta = best->value;
  const CMatrix shifted = ahat - Complex(0.0, res.mu_opt) * CMatrix::Identity(ahat.rows(), ahat.cols());
  Eigen::JacobiSVD<CMatrix> svd(shifted);
  res.certificate = svd.singularValues()(svd.singularValues().size() - 1);
  return res;
}

}  // namespace twodevp
