#pragma once

// Shared fixtures and independent oracles for the test programs. Nothing in
// here calls the library's eigensolvers: the oracles diagonalize with their
// own cyclic Jacobi sweeps on the real symmetric embedding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twodevp/hermpair.hpp"

namespace testing {

using twodevp::CMatrix;
using twodevp::Complex;
using twodevp::CVector;
using twodevp::Index;
using twodevp::RVector;

inline CMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Index>(rows.size());
  CMatrix m(n, n);
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

// 2x2 pair with a crossing-free (t != 0) or crossing (t = 0) pair of curves.
inline std::pair<CMatrix, CMatrix> two_by_two(double t) {
  return {real_matrix({{1, t}, {t, 1}}), real_matrix({{0.2, 0}, {0, -0.5}})};
}

// 3x3 pair with an isolated 2D-eigentriple (1, 0, e3) that is not an extremum.
inline std::pair<CMatrix, CMatrix> touching_pair() {
  return {real_matrix({{2, 0, 1}, {0, 0, 1}, {1, 1, 0}}), real_matrix({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}})};
}

// touching_pair with an extra decoupled curve 0.6 - 0.6 mu that crosses
// through (1, 0).
inline std::pair<CMatrix, CMatrix> crossing_pair() {
  return {real_matrix({{2, 0, 1, 0}, {0, 0, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 0.6}}),
          real_matrix({{1, 0, 1, 0}, {0, 1, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 0.6}})};
}

// (A + I, C) share the null vector (1, -1, 0): every (mu, -1) is a 2D-eigenvalue.
inline std::pair<CMatrix, CMatrix> line_family_pair() {
  return {real_matrix({{1, 2, 0}, {2, 1, 0}, {0, 0, 4}}), real_matrix({{1, 1, 0}, {1, 1, 0}, {0, 0, -1}})};
}

// Stable tridiagonal test matrix for the distance to instability.
inline CMatrix stable_tridiagonal() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = Complex(-0.4, 6.0);
  m(1, 1) = Complex(-0.1, 1.0);
  m(2, 2) = Complex(-1.0, -3.0);
  m(3, 3) = Complex(-5.0, 1.0);
  for (int i = 0; i < 3; ++i) m(i, i + 1) = m(i + 1, i) = 1.0;
  return m;
}

// Critical points of the two curves of two_by_two(0.2). Derived by solving
// det(A - mu C - lambda I) = 0 together with its mu-derivative in 40-digit
// arithmetic, and cross-checked on a 1e-6 grid.
constexpr double kTwoByTwoMu = 0.27105237087157537131;
constexpr double kTwoByTwoTop = 1.1807015805810502475;
constexpr double kTwoByTwoBottom = 0.81929841941894975246;

// ---------------------------------------------------------------- random data

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  double normal() {
    // Box-Muller on portable uniforms.
    double u = 0.0;
    while (u <= 0.0) u = uniform(0.0, 1.0);
    const double v = uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline CMatrix random_hermitian(Rng& rng, Index n) {
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  }
  return 0.5 * (m + m.adjoint());
}

inline CVector random_unit(Rng& rng, Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

inline CMatrix random_unitary(Rng& rng, Index n) {
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<CMatrix> qr(m);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

// Hermitian matrix with the given spectrum in a random basis.
inline CMatrix with_spectrum(Rng& rng, const RVector& spectrum) {
  const CMatrix q = random_unitary(rng, spectrum.size());
  CMatrix m = q * spectrum.cast<Complex>().asDiagonal() * q.adjoint();
  return 0.5 * (m + m.adjoint());
}

// Indefinite C with |eigenvalues| in [0.2, 2] and at least one of each sign.
inline CMatrix random_indefinite(Rng& rng, Index n) {
  RVector d(n);
  const int positives = rng.integer(1, static_cast<int>(n) - 1);
  for (Index i = 0; i < n; ++i) {
    const double mag = rng.uniform(0.2, 2.0);
    d(i) = i < positives ? mag : -mag;
  }
  return with_spectrum(rng, d);
}

// ---------------------------------------------------------------- oracles

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
// descending, optionally with eigenvectors in the columns of *vecs.
inline std::vector<double> jacobi_eigen(Eigen::MatrixXd a, Eigen::MatrixXd* vecs = nullptr) {
  const Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-300 || std::sqrt(off) < 1e-17 * (1.0 + a.norm())) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index l, Index r) { return a(l, l) > a(r, r); });
  std::vector<double> out;
  for (Index i : order) out.push_back(a(i, i));
  if (vecs != nullptr) {
    vecs->resize(n, n);
    for (Index j = 0; j < n; ++j) vecs->col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

// Eigenvalues of Hermitian h, descending. The real embedding
// [Re -Im; Im Re] doubles every eigenvalue; every second one is kept.
inline std::vector<double> oracle_eigvals(const CMatrix& h) {
  const Index n = h.rows();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e << h.real(), -h.imag(), h.imag(), h.real();
  const std::vector<double> all = jacobi_eigen(e);
  std::vector<double> out;
  for (std::size_t i = 0; i < all.size(); i += 2) out.push_back(0.5 * (all[i] + all[i + 1]));
  return out;
}

inline std::vector<double> oracle_curves(const CMatrix& a, const CMatrix& c, double mu) {
  return oracle_eigvals(a - mu * c);
}

// Smallest singular value as the square root of the smallest eigenvalue of
// M^H M.
inline double oracle_sigma_min(const CMatrix& m) {
  const std::vector<double> ev = oracle_eigvals(m.adjoint() * m);
  return std::sqrt(std::max(0.0, ev.back()));
}

// Spectral norm of a Hermitian matrix by power iteration on h^2.
inline double oracle_norm(const CMatrix& h) {
  CVector v = CVector::Ones(h.rows()) / std::sqrt(static_cast<double>(h.rows()));
  double est = 0.0;
  for (int it = 0; it < 5000; ++it) {
    CVector w = h * (h * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - est) <= 1e-15 * next) return next;
    est = next;
  }
  return est;
}

inline double rho(const CMatrix& m, const CVector& x) { return (x.dot(m * x)).real() / x.squaredNorm(); }

// Golden-section minimum of f on [lo, hi], written independently of the
// library's optimizer.
template <class F>
std::pair<double, double> oracle_golden(F f, double lo, double hi, double tol = 1e-13) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace testing
