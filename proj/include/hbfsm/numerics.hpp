#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hbfsm {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct SvdInfo {
  double smax = 0.0;
  double smin = 0.0;  // smallest singular value of the full spectrum
  int rank = 0;       // numerical rank under the pinv cutoff
};

// Moore-Penrose pseudo-inverse via SVD. Singular values below
// max(rows, cols) * eps * smax are treated as zero.
CMatrix pseudo_inverse(const CMatrix& a, SvdInfo* info = nullptr);

// smax/smin; +inf when smin underflows to zero. Zero-sized input throws.
double condition_number(const CMatrix& a);

bool all_finite(const CMatrix& a);

}  // namespace hbfsm
