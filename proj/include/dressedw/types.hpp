#ifndef DRESSEDW_TYPES_HPP
#define DRESSEDW_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dressedw {

using cplx = std::complex<double>;

/// Dimension of the truncated collective space {psi1..psi9, G}.
inline constexpr int kDim = 10;

using Ket = Eigen::Matrix<cplx, kDim, 1>;
using Operator = Eigen::Matrix<cplx, kDim, kDim>;
using DensityMatrix = Operator;

using Mat3 = Eigen::Matrix<cplx, 3, 3>;
using Vec3 = Eigen::Matrix<cplx, 3, 1>;

/// Isometry from the three effective-frame labels into the full space.
using Frame = Eigen::Matrix<cplx, kDim, 3>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A propagation did not meet its norm/trace/positivity budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const std::string &what)
{
    if (!cond) {
        throw ValidationError(what);
    }
}

} // namespace dressedw

#endif // DRESSEDW_TYPES_HPP
