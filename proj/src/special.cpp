#include "desinc/special.hpp"

#include <algorithm>
#include <complex>
#include <limits>

namespace desinc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double half_pi = 0.5 * std::numbers::pi;

// Below this magnitude the Maclaurin series is summed directly; the largest
// term at x = 4 is about 1.7, so cancellation costs at most a few ulps.
constexpr double si_series_limit = 4.0;

double si_series(double x)
{
    const double x2 = x * x;
    double power = x; // (-1)^k x^(2k+1) / (2k+1)!
    double sum = x;
    for (int k = 1; k < 60; ++k) {
        power *= -x2 / static_cast<double>((2 * k) * (2 * k + 1));
        const double term = power / static_cast<double>(2 * k + 1);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
    }
    return sum;
}

// Si(x) = pi/2 + Im(e^{-ix} E1(ix)) for x > 0, with E1(ix) from its
// continued fraction evaluated by the modified Lentz method.
double si_continued_fraction(double x)
{
    using cplx = std::complex<double>;
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    cplx b(1.0, x);
    cplx c(1.0 / tiny, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 2; i < 1000; ++i) {
        const double a = -static_cast<double>((i - 1) * (i - 1));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
            break;
    }
    h *= cplx(std::cos(x), -std::sin(x));
    return half_pi + h.imag();
}

} // namespace

double sinc(double x)
{
    const double px = pi * x;
    if (std::abs(x) < 1e-4) {
        const double p2 = px * px;
        return 1.0 - p2 / 6.0 + p2 * p2 / 120.0;
    }
    return std::sin(px) / px;
}

double si(double x)
{
    const double ax = std::abs(x);
    const double value = ax <= si_series_limit ? si_series(ax) : si_continued_fraction(ax);
    return x < 0.0 ? -value : value;
}

double phi_de(double s, const Interval& iv)
{
    // Written as a logistic in 2y so that the distance to the nearer
    // endpoint keeps full relative precision.
    const double y = half_pi * std::sinh(s);
    const double len = iv.length();
    if (y < 0.0)
        return iv.a() + len / (1.0 + std::exp(-2.0 * y));
    return iv.b() - len / (1.0 + std::exp(2.0 * y));
}

double dphi_de(double s, const Interval& iv)
{
    const double ay = std::abs(half_pi * std::sinh(s));
    // sech^2(y) = 4 e^{-2|y|} / (1 + e^{-2|y|})^2
    const double q = std::exp(-2.0 * ay);
    const double sech2 = 4.0 * q / ((1.0 + q) * (1.0 + q));
    if (sech2 == 0.0)
        return 0.0;
    return 0.5 * iv.length() * half_pi * std::cosh(s) * sech2;
}

double phi_de_inv(double t, const Interval& iv)
{
    if (!(iv.contains(t)))
        throw std::domain_error("phi_de_inv: t outside [a, b]");
    const double guard = iv.length() * 2.2e-16;
    t = std::clamp(t, iv.a() + guard, iv.b() - guard);
    // atanh((2t - a - b)/(b - a)) = log((t - a)/(b - t)) / 2
    const double z = 0.5 * std::log((t - iv.a()) / (iv.b() - t));
    return std::asinh(z / half_pi);
}

double j_kernel(long j, double h, double s)
{
    const double offset = (s - static_cast<double>(j) * h) / h;
    return h * (0.5 + si(pi * offset) / pi);
}

} // namespace desinc
