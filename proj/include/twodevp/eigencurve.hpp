#pragma once

#include <span>
#include <utility>
#include <vector>

#include "twodevp/hermpair.hpp"

namespace twodevp {

// Sorted eigencurves of A - mu C at one parameter value.
//
// gvals[i] = x_i^H C x_i for the eigenvector returned by the solver. Where
// lambda_i is simple this is -lambda_i'(mu). Inside a cluster (gap to a
// neighbour <= cluster threshold) the eigenvector is an arbitrary rotation
// within the eigenspace and reliable[i] is false.
struct CurveSample {
  double mu = 0.0;
  RVector lambdas;
  RVector gvals;
  std::vector<bool> reliable;
};

// Multiple eigenvalue lambda0 of A - mu0 C occupying sorted positions
// first_index .. first_index + k - 1.
struct DegenerateCluster {
  double mu0 = 0.0;
  double lambda0 = 0.0;
  Index k = 0;
  Index first_index = 0;
  CMatrix basis;      // n x k, orthonormal columns
  CMatrix projected;  // basis^H C basis
};

// One-sided slopes of the sorted curves first_index .. first_index + k - 1.
// Entry j belongs to sorted curve first_index + j. Both lists are the
// eigenvalues of -projected; right-hand slopes are non-increasing in j and
// left-hand slopes non-decreasing, which is the only assignment that keeps
// the curves sorted on either side of mu0.
struct OneSidedDerivatives {
  RVector right;
  RVector left;
};

enum class Direction { plus_infinity, minus_infinity };

struct AsymptoticBranch {
  double slope = 0.0;
  double intercept = 0.0;
  double at(double mu) const noexcept { return slope * mu + intercept; }
};

// Straight-line asymptotes of the eigencurves for |mu| -> infinity. One
// branch per eigenvalue of C (with multiplicity): slope = -lambda_C, and the
// intercepts of a group sharing lambda_C are the eigenvalues of Y^H A Y with
// Y an orthonormal basis of that eigenspace. Branches are ordered the way the
// sorted curves are ordered in the given direction.
struct AsymptoticModel {
  Direction direction = Direction::plus_infinity;
  std::vector<AsymptoticBranch> branches;
};

// Sample every sorted curve on a strictly increasing grid. Grid points are
// independent and are evaluated on up to `threads` workers (0 = auto).
std::vector<CurveSample> sample_curves(const HermitianPair& pair, std::span<const double> grid,
                                       int threads = 1);

CurveSample sample_at(const HermitianPair& pair, double mu);

// Greedy cluster around the eigenvalue nearest lambda0: grows while
// consecutive sorted eigenvalues are within the cluster threshold.
DegenerateCluster cluster_at(const HermitianPair& pair, double mu0, double lambda0);

// Cluster containing sorted position `index` of a precomputed decomposition.
DegenerateCluster cluster_around(const HermitianPair& pair, double mu0,
                                 const SpectralDecomposition& dec, Index index);

OneSidedDerivatives one_sided_derivatives(const DegenerateCluster& cluster);

// Second derivative of a simple sorted curve,
//   lambda_i'' = 2 sum_{j != i} |x_j^H C x_i|^2 / (lambda_i - lambda_j).
double curvature(const HermitianPair& pair, const SpectralDecomposition& dec, Index index);

std::pair<AsymptoticModel, AsymptoticModel> asymptotic_models(const HermitianPair& pair);

}  // namespace twodevp
