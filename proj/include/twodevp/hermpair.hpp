#pragma once

#include <algorithm>
#include <complex>

#include <Eigen/Dense>

#include "twodevp/error.hpp"

namespace twodevp {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Numerical thresholds shared by every module.
//
// Several entries are relative and get multiplied by a problem scale where
// they are used:
//   herm_tol    * max_ij |M_ij|        (asymmetry accepted before symmetrizing)
//   indef_tol   * max(1, ||C||)        (C's spectrum must straddle +-this)
//   cluster_tol * (1 + ||A||)          (eigenvalue gap rule for clusters)
//   zero_tol    * max(1, ||C||)        (vanishing derivatives / x^H C x)
// eig_tol and cert_tol are used as absolute values.
struct Tolerances {
  double herm_tol = 1e-10;
  double indef_tol = 1e-12;
  double eig_tol = 1e-10;
  double cert_tol = 1e-8;
  double cluster_tol = 1e-7;
  double zero_tol = 1e-10;

  // Throws Errc::invalid_tolerances unless all entries are positive and
  // cluster_tol >= eig_tol.
  void validate() const;
};

class HermitianPair;

class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // Symmetrizes m <- (m + m^H)/2 after checking that the asymmetry is within
  // herm_tol * max|m_ij|.
  static HermitianMatrix from(const CMatrix& m, const Tolerances& tol = {});

  const CMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

 private:
  explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {}
  friend HermitianMatrix pencil_eval(const HermitianPair&, double);

  CMatrix m_;
};

// A validated problem instance: A, C Hermitian of equal size, C indefinite.
// Only validate_pair() produces one.
class HermitianPair {
 public:
  const HermitianMatrix& a() const noexcept { return a_; }
  const HermitianMatrix& c() const noexcept { return c_; }
  Index dim() const noexcept { return a_.dim(); }

  // Spectrum of C, descending.
  const RVector& c_spectrum() const noexcept { return c_spectrum_; }
  double c_min() const { return c_spectrum_(c_spectrum_.size() - 1); }
  double c_max() const { return c_spectrum_(0); }

  // Spectral norms.
  double a_norm() const noexcept { return a_norm_; }
  double c_norm() const noexcept { return c_norm_; }

  const Tolerances& tolerances() const noexcept { return tol_; }

  // Same matrices, different thresholds.
  HermitianPair with_tolerances(const Tolerances& tol) const;

  // Effective thresholds with the problem scale folded in.
  double cluster_threshold() const noexcept { return tol_.cluster_tol * (1.0 + a_norm_); }
  double zero_threshold() const noexcept { return tol_.zero_tol * std::max(1.0, c_norm_); }
  double indefinite_threshold() const noexcept { return tol_.indef_tol * std::max(1.0, c_norm_); }

  bool c_nonsingular() const;

 private:
  friend HermitianPair validate_pair(const CMatrix&, const CMatrix&, const Tolerances&);

  HermitianMatrix a_;
  HermitianMatrix c_;
  RVector c_spectrum_;
  double a_norm_ = 0.0;
  double c_norm_ = 0.0;
  Tolerances tol_;
};

struct Residuals {
  double eig = 0.0;   // ||(A - mu C)x - lambda x||
  double iso = 0.0;   // |x^H C x|
  double norm = 0.0;  // |x^H x - 1|

  double max() const noexcept { return std::max(eig, std::max(iso, norm)); }
};

struct TwoDEigentriple {
  double mu = 0.0;
  double lambda = 0.0;
  CVector x;
  Residuals residuals;
  bool certified = false;
};

// Eigenvalues in non-increasing order; column i of eigenvectors pairs with
// eigenvalue i.
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

HermitianPair validate_pair(const CMatrix& a, const CMatrix& c, const Tolerances& tol = {});

// A - mu C.
HermitianMatrix pencil_eval(const HermitianPair& pair, double mu);

SpectralDecomposition eigh_desc(const HermitianMatrix& m);
RVector eigvalsh_desc(const HermitianMatrix& m);

// x^H M x / x^H x. Throws Errc::zero_vector for x = 0.
double rayleigh(const HermitianMatrix& m, const CVector& x, const Tolerances& tol = {});

// Normalizes x and evaluates the three 2DEVP residuals; certified iff all
// three are within tol.cert_tol (the pair's own tolerances by default).
TwoDEigentriple certify(const HermitianPair& pair, double mu, double lambda, const CVector& x,
                        const Tolerances& tol);
TwoDEigentriple certify(const HermitianPair& pair, double mu, double lambda, const CVector& x);

// max |eigenvalue|.
double spectral_norm(const HermitianMatrix& m);

}  // namespace twodevp
