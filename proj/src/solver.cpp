#include "twodevp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace twodevp {

const char* to_string(BoundSource s) noexcept {
  switch (s) {
    case BoundSource::closed_form: return "closed_form";
    case BoundSource::asymptote_bracket: return "asymptote_bracket";
    case BoundSource::user: return "user";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  if (grid_points < 3) throw Error(Errc::invalid_options, "grid_points must be at least 3");
  if (!(refine_tol > 0.0)) throw Error(Errc::invalid_options, "refine_tol must be positive");
  if (max_bisect < 1) throw Error(Errc::invalid_options, "max_bisect must be positive");
  if (threads < 0) throw Error(Errc::invalid_options, "threads must be non-negative");
  if (mu_box) {
    const auto [lo, hi] = *mu_box;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw Error(Errc::invalid_options, "mu_box must be a finite interval lo < hi");
    }
  }
}

namespace {

double slope_of(const HermitianPair& pair, const SpectralDecomposition& dec, Index index) {
  const auto v = dec.eigenvectors.col(index);
  return -v.dot(pair.c().matrix() * v).real();
}

int sign_with_zero(double v, double zero) { return v > zero ? 1 : (v < -zero ? -1 : 0); }

double slope_at(const HermitianPair& pair, double mu, Index index) {
  return slope_of(pair, eigh_desc(pencil_eval(pair, mu)), index);
}

// Uniform double in [0, 1) from raw generator bits, so draws are identical on
// every standard library.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool near_level(double lambda, const std::vector<double>& levels, double tol) {
  return std::any_of(levels.begin(), levels.end(),
                     [&](double s) { return std::abs(lambda - s) <= tol; });
}

// Keeps the smallest-residual representative of triples that agree in
// (mu, lambda) up to 10 refine_tol in mu and 10 cert_tol (1 + ||A||) in lambda.
std::vector<TwoDEigentriple> dedup_sorted(std::vector<TwoDEigentriple> in, const HermitianPair& pair,
                                          const SolveOptions& opts) {
  std::sort(in.begin(), in.end(), [](const auto& l, const auto& r) {
    return l.mu != r.mu ? l.mu < r.mu : l.lambda < r.lambda;
  });
  const double lambda_tol = 10.0 * pair.tolerances().cert_tol * (1.0 + pair.a_norm());
  std::vector<TwoDEigentriple> out;
  for (auto& t : in) {
    const double mu_tol = 10.0 * opts.refine_tol * (1.0 + std::abs(t.mu));
    auto same = std::find_if(out.begin(), out.end(), [&](const TwoDEigentriple& o) {
      return std::abs(o.mu - t.mu) <= mu_tol && std::abs(o.lambda - t.lambda) <= lambda_tol;
    });
    if (same == out.end()) {
      out.push_back(std::move(t));
    } else if (t.residuals.max() < same->residuals.max()) {
      *same = std::move(t);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return l.mu != r.mu ? l.mu < r.mu : l.lambda < r.lambda;
  });
  return out;
}

// Critical point of a convex (minimize) or concave (maximize) sorted curve.
TwoDEigentriple extremal(const HermitianPair& pair, const SolveOptions& opts, Index index,
                         bool minimize) {
  opts.validate();
  const MuBound bound = mu_bound(pair, opts);
  const auto [lo, hi] = detail::search_box(pair, opts, bound);
  const int expected_lo = minimize ? -1 : 1;
  const int s_lo = detail::slope_sign(pair, lo, index);
  const int s_hi = detail::slope_sign(pair, hi, index);

  double mu = 0.0;
  if (s_lo == 0) {
    mu = lo;
  } else if (s_hi == 0) {
    mu = hi;
  } else if (s_lo != expected_lo || s_hi != -expected_lo) {
    std::ostringstream os;
    os << (minimize ? "top curve is not decreasing-then-increasing" : "bottom curve is not increasing-then-decreasing")
       << " on [" << lo << ", " << hi << "]";
    throw Error(Errc::bracket_failure, os.str());
  } else {
    mu = detail::bisect_slope(pair, index, lo, hi, s_lo, opts);
  }
  return triple_at(pair, mu, index);
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo + step * i;
  grid.back() = hi;
  return grid;
}

ScanResult scan_impl(const HermitianPair& pair, const SolveOptions& opts, const MuBound& bound,
                     const std::vector<double>& levels) {
  const auto [lo, hi] = detail::search_box(pair, opts, bound);
  const std::vector<double> grid = linspace(lo, hi, opts.grid_points);
  const std::vector<CurveSample> samples = sample_curves(pair, grid, opts.threads);
  const Index n = pair.dim();
  const int count = opts.grid_points;
  const double zero = pair.zero_threshold();
  const double ctol = pair.cluster_threshold();
  const double cert_tol = pair.tolerances().cert_tol;
  const double step = grid[1] - grid[0];

  auto lam = [&](int k, Index i) { return samples[static_cast<std::size_t>(k)].lambdas(i); };
  auto slope = [&](int k, Index i) { return -samples[static_cast<std::size_t>(k)].gvals(i); };
  auto reliable = [&](int k, Index i) {
    return samples[static_cast<std::size_t>(k)].reliable[static_cast<std::size_t>(i)];
  };
  auto on_line = [&](int k, Index i) { return near_level(lam(k, i), levels, ctol); };

  struct Candidate {
    double mu;
    Index index;
  };
  std::vector<Candidate> candidates;

  for (Index i = 0; i < n; ++i) {
    // Zeros and sign changes of the slope; kinks where the one-sided slopes
    // change sign are bracketed the same way.
    for (int k = 0; k + 1 < count; ++k) {
      if (on_line(k, i) || on_line(k + 1, i)) continue;
      const int s0 = sign_with_zero(slope(k, i), zero);
      const int s1 = sign_with_zero(slope(k + 1, i), zero);
      if (s0 == 0) {
        candidates.push_back({grid[static_cast<std::size_t>(k)], i});
      } else if (s1 != 0 && s1 != s0) {
        candidates.push_back(
            {detail::bisect_slope(pair, i, grid[static_cast<std::size_t>(k)],
                                  grid[static_cast<std::size_t>(k + 1)], s0, opts),
             i});
      }
    }
    if (!on_line(count - 1, i) && sign_with_zero(slope(count - 1, i), zero) == 0) {
      candidates.push_back({grid.back(), i});
    }

    // Slopes that touch zero without changing sign: local minima of |slope|
    // between same-signed neighbours. The extremum of the slope is a zero of
    // the curvature.
    for (int k = 1; k + 1 < count; ++k) {
      const double sm = slope(k - 1, i);
      const double s0 = slope(k, i);
      const double sp = slope(k + 1, i);
      if (!(reliable(k - 1, i) && reliable(k, i) && reliable(k + 1, i))) continue;
      if (on_line(k, i)) continue;
      const int sign = sign_with_zero(s0, zero);
      if (sign == 0 || sign_with_zero(sm, zero) != sign || sign_with_zero(sp, zero) != sign) continue;
      if (!(std::abs(s0) < std::abs(sm) && std::abs(s0) <= std::abs(sp))) continue;

      const double a = grid[static_cast<std::size_t>(k - 1)];
      const double b = grid[static_cast<std::size_t>(k + 1)];
      auto curv = [&](double mu) {
        return curvature(pair, eigh_desc(pencil_eval(pair, mu)), i);
      };
      double mu_star = 0.0;
      const double ca = curv(a);
      const double cb = curv(b);
      if ((ca < 0.0) != (cb < 0.0)) {
        double l = a, r = b;
        const bool neg_left = ca < 0.0;
        for (int it = 0; it < opts.max_bisect && (r - l) > opts.refine_tol * (1.0 + std::abs(l)); ++it) {
          const double m = 0.5 * (l + r);
          ((curv(m) < 0.0) == neg_left ? l : r) = m;
        }
        mu_star = 0.5 * (l + r);
      } else {
        mu_star = detail::golden_minimize([&](double mu) { return std::abs(slope_at(pair, mu, i)); }, a, b,
                                          opts.refine_tol, opts.max_bisect);
      }
      if (std::abs(slope_at(pair, mu_star, i)) <= 10.0 * cert_tol) candidates.push_back({mu_star, i});
    }
  }

  // Crossings of neighbouring curves: local minima of the gap, sharpened by
  // golden section. Slopes differ by at most 2||C||, which bounds the gap a
  // true crossing can leave at the nearest grid point.
  const double gap_screen = 2.0 * pair.c_norm() * step * 1.01 + ctol;
  std::vector<Candidate> crossings;
  for (Index i = 0; i + 1 < n; ++i) {
    auto gap = [&](int k) { return lam(k, i) - lam(k, i + 1); };
    for (int k = 0; k < count; ++k) {
      const double g = gap(k);
      if (g > gap_screen) continue;
      if (k > 0 && gap(k - 1) < g) continue;
      if (k + 1 < count && gap(k + 1) < g) continue;
      if (on_line(k, i) || on_line(k, i + 1)) continue;
      const double a = grid[static_cast<std::size_t>(std::max(k - 1, 0))];
      const double b = grid[static_cast<std::size_t>(std::min(k + 1, count - 1))];
      const double mu_c = detail::golden_minimize(
          [&](double mu) {
            const RVector ev = eigvalsh_desc(pencil_eval(pair, mu));
            return ev(i) - ev(i + 1);
          },
          a, b, opts.refine_tol, opts.max_bisect);
      const RVector ev = eigvalsh_desc(pencil_eval(pair, mu_c));
      if (ev(i) - ev(i + 1) <= ctol) crossings.push_back({mu_c, i});
    }
  }

  ScanResult result;
  std::vector<TwoDEigentriple> found;
  for (const auto& c : candidates) {
    TwoDEigentriple t = triple_at(pair, c.mu, c.index);
    if (near_level(t.lambda, levels, ctol)) continue;
    (t.certified ? found : result.near_misses).push_back(std::move(t));
  }
  for (const auto& c : crossings) {
    const SpectralDecomposition dec = eigh_desc(pencil_eval(pair, c.mu));
    const DegenerateCluster cl = cluster_around(pair, c.mu, dec, c.index);
    CVector x;
    try {
      x = construct_isotropic_vector(cl, zero);
    } catch (const Error& e) {
      if (e.code() == Errc::definite_projection) continue;  // not a 2D-eigenvalue
      throw;
    }
    const double lambda = rayleigh(pencil_eval(pair, c.mu), x, pair.tolerances());
    TwoDEigentriple t = certify(pair, c.mu, lambda, x);
    if (near_level(t.lambda, levels, ctol)) continue;
    (t.certified ? found : result.near_misses).push_back(std::move(t));
  }
  result.triples = dedup_sorted(std::move(found), pair, opts);
  result.near_misses = dedup_sorted(std::move(result.near_misses), pair, opts);
  return result;
}

}  // namespace

namespace detail {

int slope_sign(const HermitianPair& pair, double mu, Index index) {
  return sign_with_zero(slope_at(pair, mu, index), pair.zero_threshold());
}

double bisect_slope(const HermitianPair& pair, Index index, double lo, double hi, int sign_lo,
                    const SolveOptions& opts) {
  for (int it = 0; it < opts.max_bisect; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= opts.refine_tol * (1.0 + std::abs(mid))) break;
    // Exact sign here: the zero band of slope_sign would stop the search
    // as soon as |slope| <= zero_threshold, far short of refine_tol.
    const double slope = slope_at(pair, mid, index);
    if (slope == 0.0) return mid;
    ((slope > 0.0 ? 1 : -1) == sign_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> search_box(const HermitianPair& pair, const SolveOptions& opts,
                                     const MuBound& bound) {
  (void)pair;
  if (opts.mu_box) return *opts.mu_box;
  const double half = 1.001 * bound.bound + 1e-8 * (1.0 + bound.bound);
  return {-half, half};
}

}  // namespace detail

MuBound mu_bound(const HermitianPair& pair, const SolveOptions& opts) {
  if (opts.mu_box) {
    return {std::max(std::abs(opts.mu_box->first), std::abs(opts.mu_box->second)), BoundSource::user};
  }
  const RVector& spec = pair.c_spectrum();
  const double zero = pair.indefinite_threshold();
  double plus = std::numeric_limits<double>::infinity();
  double minus = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < spec.size(); ++i) {
    if (spec(i) > zero) plus = std::min(plus, spec(i));
    if (spec(i) < -zero) minus = std::max(minus, spec(i));
  }
  const double closed = pair.a_norm() / std::sqrt(-minus * plus);
  if (pair.c_nonsingular()) return {closed, BoundSource::closed_form};

  // Singular C: widen until every sorted curve has a settled slope at both
  // ends, either a fixed nonzero sign or negligible (horizontal) at R and 2R.
  const double slope_zero = pair.zero_threshold();
  auto settled = [&](double r) {
    for (double side : {1.0, -1.0}) {
      const CurveSample near = sample_at(pair, side * r);
      const CurveSample far = sample_at(pair, 2.0 * side * r);
      for (Index i = 0; i < pair.dim(); ++i) {
        const double s1 = near.gvals(i);
        const double s2 = far.gvals(i);
        const bool flat = std::abs(s1) <= slope_zero && std::abs(s2) <= slope_zero;
        const bool monotone = std::abs(s1) > slope_zero && std::abs(s2) > slope_zero && (s1 > 0) == (s2 > 0);
        if (!(flat || monotone)) return false;
      }
    }
    return true;
  };
  double r = std::max(1.0, 2.0 * closed);
  for (int it = 0; it < 60 && !settled(r); ++it) r *= 2.0;
  return {2.0 * r, BoundSource::asymptote_bracket};
}

TwoDEigentriple triple_at(const HermitianPair& pair, double mu, Index index) {
  const HermitianMatrix h = pencil_eval(pair, mu);
  const SpectralDecomposition dec = eigh_desc(h);
  TwoDEigentriple own = certify(pair, mu, dec.eigenvalues(index), dec.eigenvectors.col(index));
  if (own.certified) return own;

  const DegenerateCluster cl = cluster_around(pair, mu, dec, index);
  if (cl.k == 1) return own;
  CVector x;
  try {
    x = construct_isotropic_vector(cl, pair.zero_threshold());
  } catch (const Error& e) {
    if (e.code() == Errc::definite_projection) return own;
    throw;
  }
  TwoDEigentriple mixed = certify(pair, mu, rayleigh(h, x, pair.tolerances()), x);
  return mixed.residuals.max() < own.residuals.max() ? mixed : own;
}

CVector construct_isotropic_vector(const DegenerateCluster& cluster, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(cluster.projected);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::eig_solver_failure, "projected eigenproblem did not converge");
  }
  const RVector& w = es.eigenvalues();  // ascending
  const CMatrix& u = es.eigenvectors();
  CVector z;
  Index smallest = 0;
  w.cwiseAbs().minCoeff(&smallest);
  if (std::abs(w(smallest)) <= zero_tol) {
    z = u.col(smallest);
  } else if (w(0) < 0.0 && w(w.size() - 1) > 0.0) {
    const double beta = w(0);
    const double alpha = w(w.size() - 1);
    // z^H P z = (-beta) alpha + alpha beta = 0
    z = std::sqrt(-beta) * u.col(w.size() - 1) + std::sqrt(alpha) * u.col(0);
  } else {
    std::ostringstream os;
    os << "projected matrix is definite (eigenvalues in [" << w(0) << ", " << w(w.size() - 1) << "])";
    throw Error(Errc::definite_projection, os.str());
  }
  CVector x = cluster.basis * z;
  return x / x.norm();
}

TwoDEigentriple minimize_top_curve(const HermitianPair& pair, const SolveOptions& opts) {
  return extremal(pair, opts, 0, true);
}

TwoDEigentriple maximize_bottom_curve(const HermitianPair& pair, const SolveOptions& opts) {
  return extremal(pair, opts, pair.dim() - 1, false);
}

RegularityVerdict regularity_probe(const HermitianPair& pair, const SolveOptions& opts) {
  RegularityVerdict verdict;
  if (pair.c_nonsingular()) return verdict;

  // det(A - sigma I - mu C) has degree <= n in mu, so a sigma that is an
  // eigenvalue of A - mu_j C at n + 1 distinct mu_j makes it vanish
  // identically.
  const Index n = pair.dim();
  const double r = 1.0 + pair.a_norm() / pair.c_norm();
  std::mt19937_64 rng(opts.seed);
  std::vector<double> mus;
  while (static_cast<Index>(mus.size()) < n + 1) {
    const double mu = r * (2.0 * unit_draw(rng) - 1.0);
    if (std::none_of(mus.begin(), mus.end(), [&](double m) { return m == mu; })) mus.push_back(mu);
  }
  std::vector<RVector> spectra;
  spectra.reserve(mus.size());
  for (double mu : mus) spectra.push_back(eigvalsh_desc(pencil_eval(pair, mu)));

  const double tol = pair.cluster_threshold();
  std::vector<double> levels;
  for (Index i = 0; i < n; ++i) {
    const double sigma = spectra[0](i);
    double sum = sigma;
    bool everywhere = true;
    for (std::size_t j = 1; j < spectra.size() && everywhere; ++j) {
      Index nearest = 0;
      const double d = (spectra[j].array() - sigma).abs().minCoeff(&nearest);
      everywhere = d <= tol;
      sum += spectra[j](nearest);
    }
    if (!everywhere) continue;
    const double level = sum / static_cast<double>(spectra.size());
    if (!near_level(level, levels, tol)) levels.push_back(level);
  }
  std::sort(levels.begin(), levels.end());
  if (!levels.empty()) {
    verdict.regular = false;
    verdict.witness_sigma = levels.front();
    verdict.witness_lambda_lines = levels;
  }
  return verdict;
}

ScanResult scan_interior(const HermitianPair& pair, const SolveOptions& opts) {
  opts.validate();
  const RegularityVerdict reg = regularity_probe(pair, opts);
  return scan_impl(pair, opts, mu_bound(pair, opts), reg.witness_lambda_lines);
}

LambdaBounds lambda_bounds(const HermitianPair& pair, const SolveOptions& opts) {
  const TwoDEigentriple top = minimize_top_curve(pair, opts);
  const TwoDEigentriple bottom = maximize_bottom_curve(pair, opts);
  return {bottom.lambda, top.lambda, top.mu, bottom.mu};
}

TwoDEigentriple line_family_triple(const HermitianPair& pair, double mu, double sigma0) {
  const HermitianMatrix h = pencil_eval(pair, mu);
  const SpectralDecomposition dec = eigh_desc(h);
  Index nearest = 0;
  (dec.eigenvalues.array() - sigma0).abs().minCoeff(&nearest);
  const DegenerateCluster cl = cluster_around(pair, mu, dec, nearest);
  const CVector x = cl.k == 1 ? CVector(dec.eigenvectors.col(nearest))
                              : construct_isotropic_vector(cl, pair.zero_threshold());
  return certify(pair, mu, sigma0, x);
}

SolveReport find_all(const HermitianPair& pair, const SolveOptions& opts) {
  opts.validate();
  SolveReport report;
  report.regularity = regularity_probe(pair, opts);
  report.mu_bound = mu_bound(pair, opts);
  const std::vector<double>& levels = report.regularity.witness_lambda_lines;
  if (!report.regularity.regular) report.line_families = levels;

  const TwoDEigentriple top = minimize_top_curve(pair, opts);
  const TwoDEigentriple bottom = maximize_bottom_curve(pair, opts);
  report.lambda_bounds = {bottom.lambda, top.lambda, top.mu, bottom.mu};

  ScanResult scan = scan_impl(pair, opts, report.mu_bound, levels);
  std::vector<TwoDEigentriple> all = std::move(scan.triples);
  std::vector<TwoDEigentriple> misses = std::move(scan.near_misses);
  const double ctol = pair.cluster_threshold();
  for (const TwoDEigentriple& t : {top, bottom}) {
    if (near_level(t.lambda, levels, ctol)) continue;
    (t.certified ? all : misses).push_back(t);
  }
  report.triples = dedup_sorted(std::move(all), pair, opts);
  report.near_misses = dedup_sorted(std::move(misses), pair, opts);
  return report;
}

}  // namespace twodevp
