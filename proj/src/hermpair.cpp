#include "twodevp/hermpair.hpp"

#include <cmath>
#include <sstream>

namespace twodevp {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_indefinite: return "NotIndefinite";
    case Errc::non_finite_parameter: return "NonFiniteParameter";
    case Errc::eig_solver_failure: return "EigSolverFailure";
    case Errc::zero_vector: return "ZeroVector";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::invalid_grid: return "InvalidGrid";
    case Errc::no_eigenvalue_nearby: return "NoEigenvalueNearby";
    case Errc::wrong_dimension: return "WrongDimension";
    case Errc::bracket_failure: return "BracketFailure";
    case Errc::definite_projection: return "DefiniteProjection";
    case Errc::not_positive_definite: return "NotPositiveDefinite";
    case Errc::not_stable: return "NotStable";
    case Errc::invalid_tolerances: return "InvalidTolerances";
    case Errc::invalid_options: return "InvalidOptions";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  for (double t : {herm_tol, indef_tol, eig_tol, cert_tol, cluster_tol, zero_tol}) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(Errc::invalid_tolerances, "all tolerances must be finite and positive");
    }
  }
  if (cluster_tol < eig_tol) {
    throw Error(Errc::invalid_tolerances, "cluster_tol must not be smaller than eig_tol");
  }
}

HermitianMatrix HermitianMatrix::from(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols() << ", expected square";
    throw Error(Errc::dimension_mismatch, os.str());
  }
  if (m.size() == 0) {
    throw Error(Errc::dimension_mismatch, "empty matrix");
  }
  if (!m.allFinite()) {
    throw Error(Errc::non_finite_parameter, "matrix has non-finite entries");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.herm_tol * scale) {
    std::ostringstream os;
    os << "max |M_ij - conj(M_ji)| = " << asym << " exceeds " << tol.herm_tol * scale;
    throw Error(Errc::not_hermitian, os.str());
  }
  CMatrix sym = 0.5 * (m + m.adjoint());
  for (Index i = 0; i < sym.rows(); ++i) sym(i, i) = Complex(sym(i, i).real(), 0.0);
  return HermitianMatrix(std::move(sym));
}

bool HermitianPair::c_nonsingular() const {
  return c_spectrum_.cwiseAbs().minCoeff() > indefinite_threshold();
}

HermitianPair HermitianPair::with_tolerances(const Tolerances& tol) const {
  tol.validate();
  HermitianPair copy = *this;
  copy.tol_ = tol;
  return copy;
}

HermitianPair validate_pair(const CMatrix& a, const CMatrix& c, const Tolerances& tol) {
  tol.validate();
  if (a.rows() != c.rows() || a.cols() != c.cols()) {
    throw Error(Errc::dimension_mismatch, "A and C must have the same dimension");
  }
  HermitianPair pair;
  pair.a_ = HermitianMatrix::from(a, tol);
  pair.c_ = HermitianMatrix::from(c, tol);
  pair.tol_ = tol;
  pair.c_spectrum_ = eigvalsh_desc(pair.c_);
  pair.c_norm_ = pair.c_spectrum_.cwiseAbs().maxCoeff();
  pair.a_norm_ = spectral_norm(pair.a_);

  const double threshold = pair.indefinite_threshold();
  if (!(pair.c_min() < -threshold && pair.c_max() > threshold)) {
    std::ostringstream os;
    os << "spectrum of C is [" << pair.c_min() << ", " << pair.c_max()
       << "], does not straddle zero beyond " << threshold;
    throw Error(Errc::not_indefinite, os.str());
  }
  return pair;
}

HermitianMatrix pencil_eval(const HermitianPair& pair, double mu) {
  if (!std::isfinite(mu)) throw Error(Errc::non_finite_parameter, "mu must be finite");
  // Both operands are exactly Hermitian, so the combination is too.
  return HermitianMatrix(pair.a().matrix() - mu * pair.c().matrix());
}

SpectralDecomposition eigh_desc(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::eig_solver_failure, "Hermitian eigensolver did not converge");
  }
  SpectralDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

RVector eigvalsh_desc(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::eig_solver_failure, "Hermitian eigensolver did not converge");
  }
  return es.eigenvalues().reverse();
}

double rayleigh(const HermitianMatrix& m, const CVector& x, const Tolerances& tol) {
  if (x.size() != m.dim()) throw Error(Errc::dimension_mismatch, "vector length differs from matrix size");
  const double xx = x.squaredNorm();
  if (!(xx > 0.0)) throw Error(Errc::zero_vector, "Rayleigh quotient of the zero vector");
  const Complex q = x.dot(m.matrix() * x) / xx;
  const double scale = std::max(1.0, m.matrix().cwiseAbs().maxCoeff());
  if (std::abs(q.imag()) > tol.eig_tol * scale * static_cast<double>(m.dim())) {
    throw Error(Errc::not_hermitian, "Rayleigh quotient has a non-negligible imaginary part");
  }
  return q.real();
}

TwoDEigentriple certify(const HermitianPair& pair, double mu, double lambda, const CVector& x,
                        const Tolerances& tol) {
  if (x.size() != pair.dim()) throw Error(Errc::dimension_mismatch, "vector length differs from pair size");
  if (!std::isfinite(mu) || !std::isfinite(lambda)) {
    throw Error(Errc::non_finite_parameter, "mu and lambda must be finite");
  }
  const double nx = x.norm();
  if (!(nx > 0.0)) throw Error(Errc::zero_vector, "cannot certify the zero vector");

  TwoDEigentriple t;
  t.mu = mu;
  t.lambda = lambda;
  t.x = x / nx;
  const CMatrix& a = pair.a().matrix();
  const CMatrix& c = pair.c().matrix();
  const CVector cx = c * t.x;
  t.residuals.eig = (a * t.x - mu * cx - lambda * t.x).norm();
  t.residuals.iso = std::abs(t.x.dot(cx));
  t.residuals.norm = std::abs(t.x.squaredNorm() - 1.0);
  t.certified = t.residuals.max() <= tol.cert_tol;
  return t;
}

TwoDEigentriple certify(const HermitianPair& pair, double mu, double lambda, const CVector& x) {
  return certify(pair, mu, lambda, x, pair.tolerances());
}

double spectral_norm(const HermitianMatrix& m) {
  return eigvalsh_desc(m).cwiseAbs().maxCoeff();
}

}  // namespace twodevp
