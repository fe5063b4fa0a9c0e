#pragma once

#include <vector>

#include "twodevp/hermpair.hpp"

namespace twodevp {

enum class TwoByTwoCase {
  offdiag,  // a'_12 != 0: exactly two 2D-eigentriples
  diag,     // a'_12 == 0: one 2D-eigenvalue with a circle of eigenvectors
};

// Closed-form solution of a 2x2 problem. The solve runs in coordinates where
// C' = Q^H C Q = diag(c1, c2) with c1 > 0 > c2; `transform` is Q.
struct TwoByTwoSolution {
  TwoByTwoCase kind = TwoByTwoCase::offdiag;
  std::vector<TwoDEigentriple> triples;
  Eigen::Matrix2cd transform = Eigen::Matrix2cd::Identity();
  double c1 = 0.0;
  double c2 = 0.0;
  // diag case: every unit-modulus alpha yields an eigenvector (family_vector).
  bool family = false;
  // |a'_12| landed within a factor 10 of the classification threshold.
  bool near_threshold = false;

  // Q [1/sqrt(c1); alpha/sqrt(-c2)], normalized. Isotropic for any |alpha| = 1.
  CVector family_vector(Complex alpha) const;
};

TwoByTwoSolution solve_2x2(const HermitianPair& pair);

}  // namespace twodevp
