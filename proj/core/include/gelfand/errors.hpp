#pragma once

#include <stdexcept>
#include <string>

namespace gelfand {

/// Base of every error raised by the library. The CLI maps
/// `InvalidArgument` to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition on user input (negative dimension, eps*kappa >= 1, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Shooting reached r_max without a sign change.
class NoZeroFound : public Error {
public:
    using Error::Error;
};

/// The integrator produced inf/nan.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

/// Closed form requested outside its admissible parameter range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Linearized operator has mu1 <= 0, so the supersolution solve is refused.
class NotInvertible : public Error {
public:
    using Error::Error;
};

/// eps*eps-Laplacian(w_eps) + lambda e^{u_eps} w_eps <= -1/2 fails at this eps.
class InequalityFails : public Error {
public:
    InequalityFails(const std::string& what, double eps, double threshold)
        : Error(what), eps_(eps), threshold_(threshold) {}
    [[nodiscard]] double eps() const noexcept { return eps_; }
    [[nodiscard]] double threshold() const noexcept { return threshold_; }

private:
    double eps_;
    double threshold_;
};

/// The tube operator is (numerically) singular: eps sits on or next to the resonant set.
class NearSingular : public Error {
public:
    NearSingular(const std::string& what, double gap) : Error(what), gap_(gap) {}
    [[nodiscard]] double gap() const noexcept { return gap_; }

private:
    double gap_;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Fixed-point iterate left the ball ||v|| <= C eps.
class DivergedFromBall : public Error {
public:
    using Error::Error;
};

/// Two converged stable tube solutions differ; contradicts uniqueness.
class MultipleStableSolutions : public Error {
public:
    using Error::Error;
};

}  // namespace gelfand
