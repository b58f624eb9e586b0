#ifndef DIPOLES_TYPES_HPP
#define DIPOLES_TYPES_HPP

#include <complex>

#include <Eigen/Dense>

namespace dipoles {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr Complex kI{0.0, 1.0};

// Natural units used throughout: lengths in lambda, rates in Gamma.
inline constexpr double kGamma = 1.0;
inline constexpr double kWaveNumber = 2.0 * 3.14159265358979323846;  // k = 2*pi/lambda

}  // namespace dipoles

#endif  // DIPOLES_TYPES_HPP
