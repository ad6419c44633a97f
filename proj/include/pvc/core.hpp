#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace pvc {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Invalid input: bad parameters, malformed spec files, contract violations.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A solver or ladder failed to converge.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// sqrt(z^2 - 1) with branch cut on [-1,1], asymptotic to +z at infinity.
/// Computed as sqrt(z-1)*sqrt(z+1) so the spurious imaginary-axis cut of the
/// principal branch cancels.
inline Cplx sqrt_zz_m1(Cplx z) { return std::sqrt(z - 1.0) * std::sqrt(z + 1.0); }

inline double sq(double x) { return x * x; }

inline double norm2(Cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

} // namespace pvc
