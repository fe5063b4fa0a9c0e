#include "twodevp/solver2x2.hpp"

#include <cmath>

namespace twodevp {

CVector TwoByTwoSolution::family_vector(Complex alpha) const {
  Eigen::Vector2cd local(1.0 / std::sqrt(c1), alpha / std::sqrt(-c2));
  CVector x = transform * local;
  return x / x.norm();
}

TwoByTwoSolution solve_2x2(const HermitianPair& pair) {
  if (pair.dim() != 2) throw Error(Errc::wrong_dimension, "solve_2x2 needs a 2x2 pair");
  const Tolerances& tol = pair.tolerances();
  const CMatrix& a = pair.a().matrix();
  const CMatrix& c = pair.c().matrix();

  TwoByTwoSolution sol;
  const double c_scale = pair.c_norm();
  const bool c_diagonal = std::abs(c(0, 1)) <= tol.zero_tol * c_scale;
  if (c_diagonal && c(0, 0).real() > 0.0 && c(1, 1).real() < 0.0) {
    sol.transform.setIdentity();
  } else if (c_diagonal && c(0, 0).real() < 0.0 && c(1, 1).real() > 0.0) {
    sol.transform << 0.0, 1.0, 1.0, 0.0;
  } else {
    const SpectralDecomposition dec = eigh_desc(pair.c());
    sol.transform = dec.eigenvectors;
  }
  const Eigen::Matrix2cd q = sol.transform;
  const Eigen::Matrix2cd ct = q.adjoint() * c * q;
  const Eigen::Matrix2cd at = q.adjoint() * a * q;
  sol.c1 = ct(0, 0).real();
  sol.c2 = ct(1, 1).real();
  if (!(sol.c1 > 0.0 && sol.c2 < 0.0)) {
    throw Error(Errc::not_indefinite, "C has no eigenvalues of both signs");
  }

  const double c1 = sol.c1;
  const double c2 = sol.c2;
  const double a11 = at(0, 0).real();
  const double a22 = at(1, 1).real();
  const Complex a12 = at(0, 1);
  const double abs12 = std::abs(a12);
  const double root = std::sqrt(-c1 * c2);
  const double threshold = tol.zero_tol * (1.0 + pair.a_norm());
  sol.near_threshold = abs12 > threshold / 10.0 && abs12 <= threshold * 10.0;

  if (abs12 > threshold) {
    sol.kind = TwoByTwoCase::offdiag;
    for (int sign : {+1, -1}) {
      const Complex alpha = static_cast<double>(sign) * abs12 / a12;
      const double mu = (a11 - a22 + sign * abs12 * (c1 + c2) / root) / (c1 - c2);
      const double lambda =
          (a11 / c1 - a22 / c2 + sign * 2.0 * abs12 / root) / ((c1 - c2) / (-c1 * c2));
      sol.triples.push_back(certify(pair, mu, lambda, sol.family_vector(alpha)));
    }
  } else {
    sol.kind = TwoByTwoCase::diag;
    sol.family = true;
    const double mu = (a11 - a22) / (c1 - c2);
    const double lambda = (a22 * c1 - a11 * c2) / (c1 - c2);
    for (double alpha : {1.0, -1.0}) {
      sol.triples.push_back(certify(pair, mu, lambda, sol.family_vector(alpha)));
    }
  }
  return sol;
}

}  // namespace twodevp
