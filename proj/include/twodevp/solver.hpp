#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "twodevp/eigencurve.hpp"
#include "twodevp/hermpair.hpp"

namespace twodevp {

// Numerical thresholds are not repeated here; they travel with the pair
// (HermitianPair::tolerances()).
struct SolveOptions {
  int grid_points = 2000;
  double refine_tol = 1e-12;  // mu resolution, relative to 1 + |mu|
  int max_bisect = 200;
  std::optional<std::pair<double, double>> mu_box;
  std::uint64_t seed = 0x2de5eedULL;
  int threads = 1;

  void validate() const;
};

enum class BoundSource {
  closed_form,        // ||A|| / sqrt(-lambda_C^- lambda_C^+), C nonsingular
  asymptote_bracket,  // expanded until all curves are monotone at the ends
  user,
};

const char* to_string(BoundSource s) noexcept;

// Every 2D-eigenvalue has |mu| <= bound (heuristically so for asymptote_bracket).
struct MuBound {
  double bound = 0.0;
  BoundSource source = BoundSource::closed_form;
};

// lower = max_mu lambda_n(mu) attained at mu_lo, upper = min_mu lambda_1(mu)
// attained at mu_up. Every 2D-eigenvalue has lambda in [lower, upper].
struct LambdaBounds {
  double lower = 0.0;
  double upper = 0.0;
  double mu_up = 0.0;
  double mu_lo = 0.0;
};

struct RegularityVerdict {
  bool regular = true;
  std::optional<double> witness_sigma;
  std::vector<double> witness_lambda_lines;
};

struct ScanResult {
  std::vector<TwoDEigentriple> triples;      // certified
  std::vector<TwoDEigentriple> near_misses;  // refined candidates that failed certification
};

struct SolveReport {
  std::vector<TwoDEigentriple> triples;  // certified, deduplicated, sorted by mu
  std::vector<TwoDEigentriple> near_misses;
  MuBound mu_bound;
  LambdaBounds lambda_bounds;
  RegularityVerdict regularity;
  std::vector<double> line_families;  // levels lambda0 where every (mu, lambda0) is a 2D-eigenvalue
};

MuBound mu_bound(const HermitianPair& pair, const SolveOptions& opts = {});

// Maximum 2D-eigenvalue: global minimizer of the convex top curve.
TwoDEigentriple minimize_top_curve(const HermitianPair& pair, const SolveOptions& opts = {});

// Minimum 2D-eigenvalue: global maximizer of the concave bottom curve.
TwoDEigentriple maximize_bottom_curve(const HermitianPair& pair, const SolveOptions& opts = {});

// Unit x = basis z with z^H projected z = 0. Throws Errc::definite_projection
// when the projected matrix is definite.
CVector construct_isotropic_vector(const DegenerateCluster& cluster, double zero_tol);

ScanResult scan_interior(const HermitianPair& pair, const SolveOptions& opts = {});

RegularityVerdict regularity_probe(const HermitianPair& pair, const SolveOptions& opts = {});

LambdaBounds lambda_bounds(const HermitianPair& pair, const SolveOptions& opts = {});

SolveReport find_all(const HermitianPair& pair, const SolveOptions& opts = {});

// Certified 2D-eigentriple at (mu, sigma0) on a horizontal-line family.
TwoDEigentriple line_family_triple(const HermitianPair& pair, double mu, double sigma0);

// Certifies the critical point of sorted curve `index` at mu: the curve's own
// eigenvector if it is already isotropic, otherwise an isotropic vector from
// the surrounding cluster. Returns the (possibly uncertified) best attempt.
TwoDEigentriple triple_at(const HermitianPair& pair, double mu, Index index);

namespace detail {

// Sign of the slope of sorted curve `index` at mu (-1, 0, +1), taken from
// -x^H C x of the computed eigenvector.
int slope_sign(const HermitianPair& pair, double mu, Index index);

// Bisection on slope_sign over [lo, hi] where the slope sign differs at the
// ends. Returns the located critical parameter.
double bisect_slope(const HermitianPair& pair, Index index, double lo, double hi, int sign_lo,
                    const SolveOptions& opts);

// Golden-section minimization of f on [lo, hi].
template <class F>
double golden_minimize(F&& f, double lo, double hi, double tol, int max_iter);

// Symmetric search box from the mu bound, or the user override.
std::pair<double, double> search_box(const HermitianPair& pair, const SolveOptions& opts,
                                     const MuBound& bound);

}  // namespace detail

template <class F>
double detail::golden_minimize(F&& f, double lo, double hi, double tol, int max_iter) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace twodevp
