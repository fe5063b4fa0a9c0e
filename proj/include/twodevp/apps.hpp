#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twodevp/hermpair.hpp"

namespace twodevp {

struct AppOptions {
  int grid_points = 4001;     // coarse sweep for distance_to_instability
  double refine_tol = 1e-12;  // mu resolution, relative to 1 + |mu|
  int max_bisect = 200;
  int threads = 1;
  Tolerances tol;

  void validate() const;
};

enum class MinimaxCase { caseA, caseB, caseGeneral };

const char* to_string(MinimaxCase c) noexcept;

// min_x max{rho_A(x), rho_B(x)}.
struct MinimaxResult {
  MinimaxCase kind = MinimaxCase::caseA;
  double value = 0.0;
  CVector x_opt;
  std::optional<double> mu_opt;  // caseGeneral only, in [0, 1]
  // caseGeneral only: one-sided slopes of lambda_n(A - mu (A - B)) at the
  // ends of [0, 1]. Both are strictly signed (left at 0 positive, right at 1
  // negative) whenever the classification is right.
  std::optional<double> left_slope_at_0;
  std::optional<double> right_slope_at_1;
};

MinimaxResult qcqp_minimax(const HermitianMatrix& a, const HermitianMatrix& b,
                           const AppOptions& opts = {});

// A = S P1 S, B = S P2 S with S = T^{-1/2}.
std::pair<HermitianMatrix, HermitianMatrix> qcqp_from_constraints(const HermitianMatrix& t,
                                                                  const HermitianMatrix& p1,
                                                                  const HermitianMatrix& p2,
                                                                  const Tolerances& tol = {});

struct LocalMinimum {
  double mu = 0.0;
  double value = 0.0;
};

struct StabilityResult {
  double beta = 0.0;
  double mu_opt = 0.0;
  double certificate = 0.0;  // sigma_min(Ahat - i mu_opt I), computed by SVD
  std::vector<LocalMinimum> local_minima;
};

// The Hermitian pair A = [0 Ahat; Ahat^H 0], C = [0 iI; -iI 0], whose m-th
// sorted eigencurve is sigma_min(Ahat - i mu I).
HermitianPair stability_pair(const CMatrix& ahat, const Tolerances& tol = {});

// Smallest eigenvalue real-part margin check, then min over
// mu in [-||A||, ||A||] of the m-th sorted eigencurve of stability_pair.
StabilityResult distance_to_instability(const CMatrix& ahat, const AppOptions& opts = {});

}  // namespace twodevp
