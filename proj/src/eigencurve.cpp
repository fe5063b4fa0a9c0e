#include "twodevp/eigencurve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace twodevp {

namespace {

CurveSample sample_from(const HermitianPair& pair, double mu, const SpectralDecomposition& dec) {
  const Index n = pair.dim();
  const double gap_tol = pair.cluster_threshold();
  CurveSample s;
  s.mu = mu;
  s.lambdas = dec.eigenvalues;
  s.gvals.resize(n);
  s.reliable.assign(static_cast<std::size_t>(n), true);
  const CMatrix cv = pair.c().matrix() * dec.eigenvectors;
  for (Index i = 0; i < n; ++i) {
    s.gvals(i) = dec.eigenvectors.col(i).dot(cv.col(i)).real();
    const bool tight_above = i > 0 && dec.eigenvalues(i - 1) - dec.eigenvalues(i) <= gap_tol;
    const bool tight_below = i + 1 < n && dec.eigenvalues(i) - dec.eigenvalues(i + 1) <= gap_tol;
    s.reliable[static_cast<std::size_t>(i)] = !(tight_above || tight_below);
  }
  return s;
}

}  // namespace

CurveSample sample_at(const HermitianPair& pair, double mu) {
  return sample_from(pair, mu, eigh_desc(pencil_eval(pair, mu)));
}

std::vector<CurveSample> sample_curves(const HermitianPair& pair, std::span<const double> grid,
                                       int threads) {
  if (grid.empty()) throw Error(Errc::empty_grid, "grid has no points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw Error(Errc::invalid_grid, "grid values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(Errc::invalid_grid, "grid must be strictly increasing");
    }
  }

  std::vector<CurveSample> out(grid.size());
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, grid.size());

  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = sample_at(pair, grid[i]);
    return out;
  }

  // Strided partition; each slot is written by exactly one worker.
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < grid.size(); i += workers) out[i] = sample_at(pair, grid[i]);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

DegenerateCluster cluster_around(const HermitianPair& pair, double mu0,
                                 const SpectralDecomposition& dec, Index index) {
  const Index n = dec.eigenvalues.size();
  const double gap_tol = pair.cluster_threshold();
  Index lo = index;
  Index hi = index;
  while (lo > 0 && dec.eigenvalues(lo - 1) - dec.eigenvalues(lo) <= gap_tol) --lo;
  while (hi + 1 < n && dec.eigenvalues(hi) - dec.eigenvalues(hi + 1) <= gap_tol) ++hi;

  DegenerateCluster cl;
  cl.mu0 = mu0;
  cl.first_index = lo;
  cl.k = hi - lo + 1;
  cl.lambda0 = dec.eigenvalues.segment(lo, cl.k).mean();
  cl.basis = dec.eigenvectors.middleCols(lo, cl.k);
  CMatrix proj = cl.basis.adjoint() * pair.c().matrix() * cl.basis;
  cl.projected = 0.5 * (proj + proj.adjoint());
  return cl;
}

DegenerateCluster cluster_at(const HermitianPair& pair, double mu0, double lambda0) {
  const SpectralDecomposition dec = eigh_desc(pencil_eval(pair, mu0));
  Index nearest = 0;
  (dec.eigenvalues.array() - lambda0).abs().minCoeff(&nearest);
  const double dist = std::abs(dec.eigenvalues(nearest) - lambda0);
  if (dist > pair.cluster_threshold()) {
    std::ostringstream os;
    os << "no eigenvalue of A - mu C within " << pair.cluster_threshold() << " of " << lambda0
       << " at mu = " << mu0 << " (nearest is " << dec.eigenvalues(nearest) << ")";
    throw Error(Errc::no_eigenvalue_nearby, os.str());
  }
  return cluster_around(pair, mu0, dec, nearest);
}

OneSidedDerivatives one_sided_derivatives(const DegenerateCluster& cluster) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(-cluster.projected, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::eig_solver_failure, "projected eigenproblem did not converge");
  }
  OneSidedDerivatives d;
  d.left = es.eigenvalues();            // ascending
  d.right = es.eigenvalues().reverse();  // descending
  return d;
}

double curvature(const HermitianPair& pair, const SpectralDecomposition& dec, Index index) {
  const CVector cx = pair.c().matrix() * dec.eigenvectors.col(index);
  double sum = 0.0;
  for (Index j = 0; j < dec.eigenvalues.size(); ++j) {
    if (j == index) continue;
    const double coupling = std::norm(dec.eigenvectors.col(j).dot(cx));
    sum += coupling / (dec.eigenvalues(index) - dec.eigenvalues(j));
  }
  return 2.0 * sum;
}

std::pair<AsymptoticModel, AsymptoticModel> asymptotic_models(const HermitianPair& pair) {
  const SpectralDecomposition cdec = eigh_desc(pair.c());
  const Index n = pair.dim();
  const double group_tol = pair.tolerances().cluster_tol * (1.0 + pair.c_norm());

  std::vector<AsymptoticBranch> branches;
  branches.reserve(static_cast<std::size_t>(n));
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && cdec.eigenvalues(end - 1) - cdec.eigenvalues(end) <= group_tol) ++end;
    const Index k = end - start;
    const double lambda_c = cdec.eigenvalues.segment(start, k).mean();
    const CMatrix y = cdec.eigenvectors.middleCols(start, k);
    CMatrix ya = y.adjoint() * pair.a().matrix() * y;
    ya = 0.5 * (ya + ya.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ya, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw Error(Errc::eig_solver_failure, "projected eigenproblem did not converge");
    }
    for (Index j = 0; j < k; ++j) branches.push_back({-lambda_c, es.eigenvalues()(j)});
    start = end;
  }

  AsymptoticModel plus{Direction::plus_infinity, branches};
  AsymptoticModel minus{Direction::minus_infinity, branches};
  // Far out, larger slope wins for mu -> +inf, smaller slope for mu -> -inf;
  // equal slopes are ordered by intercept.
  std::sort(plus.branches.begin(), plus.branches.end(), [](const auto& l, const auto& r) {
    return l.slope != r.slope ? l.slope > r.slope : l.intercept > r.intercept;
  });
  std::sort(minus.branches.begin(), minus.branches.end(), [](const auto& l, const auto& r) {
    return l.slope != r.slope ? l.slope < r.slope : l.intercept > r.intercept;
  });
  return {plus, minus};
}

}  // namespace twodevp
