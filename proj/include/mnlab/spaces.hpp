#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mnlab/exponent.hpp"

namespace mnlab {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

enum class ScalarField { Real, Complex };

// Finite-dimensional sequence space l^r_m over R or C (counting measure on
// {1..m}; r < inf).
struct SequenceSpace {
  int dim;
  Exponent r;
  ScalarField field;

  SequenceSpace(int m, Exponent r_, ScalarField f) : dim(m), r(r_), field(f) {
    if (m < 1) throw std::invalid_argument("space dimension must be positive");
    if (r.is_inf()) throw std::invalid_argument("sequence space requires r < inf");
  }

  SequenceSpace dual() const { return SequenceSpace(dim, r.conjugate(), field); }
};

// Ordered n-tuple of vectors in l^r_m; row i of `vectors` is x_i.
struct VectorTuple {
  SequenceSpace space;
  CMat vectors;  // n x m

  VectorTuple(SequenceSpace s, CMat rows) : space(s), vectors(std::move(rows)) {
    if (vectors.rows() < 1) throw std::invalid_argument("tuple needs n >= 1");
    if (vectors.cols() != space.dim) throw std::invalid_argument("row length != space dim");
    if (space.field == ScalarField::Real && vectors.imag().cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("real tuple has nonzero imaginary part");
  }

  int n() const { return static_cast<int>(vectors.rows()); }
  int m() const { return static_cast<int>(vectors.cols()); }
  CVec row(int i) const { return vectors.row(i).transpose(); }
};

// (sum |v_j|^r)^{1/r}, max |v_j| for r = inf.
double p_norm(const CVec& v, Exponent r);

// Lorentz norm (sum_k k^{q/p-1} (v*_k)^q)^{1/q}, v* the decreasing
// rearrangement of |v|.  Requires 1 <= p <= q < inf.
double lorentz_norm(const CVec& v, Exponent p, Exponent q);

// Same formula without the p <= q restriction (the l^{q,1}-type spaces of the
// Montgomery-Smith example); quasi-norm in general.
double lorentz_value(const CVec& v, Exponent p, Exponent q);

// (f_1,...,f_n) with f_i = n^{-1/r} (zeta^{-i}, ..., zeta^{-ni}),
// zeta = exp(2 pi i / n); every row has unit l^r norm.
VectorTuple dft_tuple(int n, Exponent r, ScalarField field = ScalarField::Complex);

// Khintchine sign-matrix pair: rows of (eps_{k,i}) enumerate all sign
// patterns in {-1,1}^n;  R = 2^{-n/r} eps,  S = 2^{-n/s} eps with s = r'.
// <Rx, Sy> = <x, y> for the duality pairing (and likewise the Hermitian one).
struct KhintchinePair {
  int n;
  Exponent r;
  RMat R;  // 2^n x n
  RMat S;  // 2^n x n
};

KhintchinePair khintchine_pair(int n, Exponent r, int cap = 12);

// Bilinear duality pairing <x, lambda> = sum_j x_j lambda_j.
inline Complex pairing(const CVec& x, const CVec& lambda) {
  return (x.transpose() * lambda)(0);
}

// Hermitian inner product [x, y] = sum_j x_j conj(y_j) (linear in x).
inline Complex inner(const CVec& x, const CVec& y) { return y.dot(x); }

// Unit-l^r vector x maximizing |<x, lambda>|; Hoelder equality case.
CVec holder_extremal(const CVec& lambda, Exponent r);

// Ascent direction G of w -> ||w||_s (d Re f = Re <dw, G>_Herm); subgradient 0
// at kinks.
CVec pnorm_gradient(const CVec& w, Exponent s);

}  // namespace mnlab
