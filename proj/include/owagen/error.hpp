#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace owagen {

namespace detail {

inline std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

}  // namespace detail

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lengths of paired inputs disagree, or a metric is asked for on n = 1.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input lies outside the domain of an operation (NaN, negative weight, α > 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The parent normal has negligible mass on [0,1].
class UnderflowError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// No truncated normal reproduces the requested (α, δ) to within ε.
///
/// Carries the best distance the calibration reached and the parabolic
/// bound δ_max = 4α(1-α) so callers can explain the rejection.
class InfeasibleError : public Error {
public:
    InfeasibleError(double alpha, double delta, double distance, double delta_max)
        : Error("decision point (alpha=" + detail::format_number(alpha) + ", delta=" + detail::format_number(delta) +
                ") is infeasible: best distance " + detail::format_number(distance) +
                ", max trade-off for this risk is delta_max=" + detail::format_number(delta_max)),
          alpha_(alpha), delta_(delta), distance_(distance), delta_max_(delta_max) {}

    double alpha() const noexcept { return alpha_; }
    double delta() const noexcept { return delta_; }
    double distance() const noexcept { return distance_; }
    double delta_max() const noexcept { return delta_max_; }

private:
    double alpha_;
    double delta_;
    double distance_;
    double delta_max_;
};

}  // namespace owagen
