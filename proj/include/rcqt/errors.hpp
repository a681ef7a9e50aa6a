// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace rcqt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature / spectral-density errors
struct NonPositiveMoment : Error { using Error::Error; };
struct QuadratureFail : Error { using Error::Error; };
struct DivisionNearZero : Error { using Error::Error; };

// Operator algebra errors
struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };

// Generator / solver errors
struct DegenerateSpectrum : Error { using Error::Error; };
struct UnsupportedCoupling : Error { using Error::Error; };
struct DegenerateKernel : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularState : Error { using Error::Error; };
struct TruncationTooSmall : Error { using Error::Error; };

// Front-end errors
struct ConfigInvalid : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace rcqt
