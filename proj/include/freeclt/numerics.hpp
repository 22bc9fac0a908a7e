#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace freeclt {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Branch of sqrt(z^2 - r^2) that behaves like z at infinity and has
// nonnegative imaginary part on the open upper half-plane.  All square
// roots of the form sqrt(z^2 - 4) in this code base go through here.
inline Complex sqrt_upper(Complex z, double r) {
    return std::sqrt(z - r) * std::sqrt(z + r);
}

struct QuadratureRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes; computed once and cached.
const QuadratureRule& gauss_legendre(int n);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n = 256);
Complex integrate_gl_complex(const std::function<Complex(double)>& f, double a, double b,
                             int n = 256);

// Integral over [lo, hi] under the substitution x = c + r*sin(theta).
// Removes square-root edge factors (both sqrt and 1/sqrt) so that
// Gauss-Legendre in theta converges at spectral rate for densities of
// semicircle/arcsine type.
double integrate_trig(const std::function<double(double)>& f, double lo, double hi, int n = 256);
Complex integrate_trig_complex(const std::function<Complex(double)>& f, double lo, double hi,
                               int n = 256);

// Double-exponential (tanh-sinh) quadrature on [a, b].  Tolerates
// integrable endpoint singularities (log, inverse square root).  The
// integrand receives the node x together with its distances to both
// endpoints, which stay accurate long after x - a underflows in x.
double tanh_sinh(const std::function<double(double x, double da, double db)>& f, double a,
                 double b, double target_eps = 1e-12, int max_level = 12);

// Convenience overload for integrands that do not need the endpoint offsets.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double target_eps = 1e-12, int max_level = 12);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace freeclt
