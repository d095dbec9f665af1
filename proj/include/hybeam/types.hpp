#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace hybeam {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle to the interval (0, 2*pi].
inline double wrap_phase(double theta)
{
    double t = std::fmod(theta, two_pi);
    if (t <= 0.0)
        t += two_pi;
    return t;
}

/// Shortest angular distance between two phases.
inline double circular_distance(double a, double b)
{
    return std::abs(std::remainder(a - b, two_pi));
}

inline cxd unit_phasor(double theta)
{
    return std::polar(1.0, theta);
}

/// Phase of z, with angle(0) defined as 0.
inline double angle_or_zero(const cxd& z)
{
    if (std::abs(z) == 0.0)
        return 0.0;
    return std::arg(z);
}

/// Unit-modulus phasor vector e^{j*phases} (no amplitude scaling).
inline VecC phasors(const VecR& phases)
{
    VecC out(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        out(i) = unit_phasor(phases(i));
    return out;
}

enum class Side { tx, rx };

} // namespace hybeam
