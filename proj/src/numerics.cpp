#include "hbfsm/numerics.hpp"

#include <limits>
#include <stdexcept>

namespace hbfsm {

CMatrix pseudo_inverse(const CMatrix& a, SvdInfo* info) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument("pseudo_inverse: empty matrix");

  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double tol =
      double(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon() * smax;

  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol && sv(i) > 0.0) {
      inv(i) = 1.0 / sv(i);
      ++rank;
    }
  }
  if (info) {
    info->smax = smax;
    info->smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    info->rank = rank;
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double condition_number(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument("condition_number: empty matrix");
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

}  // namespace hbfsm
