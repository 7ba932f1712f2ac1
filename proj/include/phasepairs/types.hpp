#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace phasepairs {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using LatticeIndex = std::vector<std::int64_t>;

inline constexpr double kPi = std::numbers::pi;

}  // namespace phasepairs
