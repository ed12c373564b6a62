#pragma once

// Scalar special functions for the double-exponential Sinc machinery:
// sinc, the sine integral Si, the DE map onto a finite interval, its
// derivative and inverse, and the Sinc indefinite-integration kernel.
//
// Everything here is a pure function of its arguments.

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace desinc {

/// Closed time interval [a, b] with finite a < b.
class Interval {
public:
    Interval(double a, double b) : a_(a), b_(b)
    {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("Interval: endpoints must be finite");
        if (!(a < b))
            throw std::invalid_argument("Interval: require a < b");
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double length() const { return b_ - a_; }
    double midpoint() const { return 0.5 * (a_ + b_); }
    bool contains(double t) const { return a_ <= t && t <= b_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double a_;
    double b_;
};

/// sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x);

/// Sine integral Si(x) = int_0^x sin(t)/t dt. Odd in x.
double si(double x);

/// The DE map s -> ((b-a)/2) tanh((pi/2) sinh s) + (b+a)/2.
double phi_de(double s, const Interval& iv);

/// Derivative of phi_de with respect to s. Underflows to 0 for large |s|.
double dphi_de(double s, const Interval& iv);

/// Inverse of phi_de. Endpoints are pulled inward by (b-a)*2.2e-16 first;
/// throws std::domain_error for t outside [a, b].
double phi_de_inv(double t, const Interval& iv);

/// J(j,h)(s) = h (1/2 + Si(pi (s - j h) / h) / pi), the antiderivative of
/// the shifted Sinc basis function S(j,h) normalised to vanish at -infinity.
double j_kernel(long j, double h, double s);

/// Global maximum of Si on the real line, attained at x = pi.
inline constexpr double si_max = 1.8519370519824661703610533701580;

} // namespace desinc
