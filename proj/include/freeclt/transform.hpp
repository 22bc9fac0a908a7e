#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "freeclt/measure.hpp"

namespace freeclt {

// Callable on the open upper half-plane plus a tag saying what it represents.
struct ComplexEvaluator {
    std::function<Complex(Complex)> fn;
    std::string tag;
    Complex operator()(Complex z) const { return fn(z); }
};

// G_mu(z) = int (z-x)^{-1} dmu(x), Im z > 0.  Uses the measure's closed-form
// transform when it carries one, otherwise exact atom sums plus quadrature.
Complex cauchy_transform(const Measure& mu, Complex z);
// Always takes the atom-sum + quadrature route (used to cross-check closed forms).
Complex cauchy_transform_quadrature(const Measure& mu, Complex z);
// int x/(z-x) dmu(x) = z*G(z) - 1, computed without the cancellation.
Complex cauchy_transform_xkernel(const Measure& mu, Complex z);

ComplexEvaluator cauchy_evaluator(const Measure& mu);

// F_mu = 1/G_mu, the reciprocal Cauchy transform (class F).
Complex reciprocal_transform(const Measure& mu, Complex z);

// Stieltjes-Perron: -Im G(x + i*eps) / pi.
double invert_density(const ComplexEvaluator& G, double x, double eps);

using Cdf = std::function<double(double)>;

// x -> mu((-inf, x)): cumulative of the gridded density plus the mass of
// atoms strictly to the left of x.
Cdf cdf_from_density(const Measure& mu);
Cdf cdf_from_density(const SignedDensity& d);

// sup over the evaluation grid of |f1 - f2|.
double kolmogorov_distance(const Cdf& f1, const Cdf& f2, std::span<const double> grid);

// Uniform grid over [lo-1, hi+1] with extra points just left/right of the
// given atom locations.
std::vector<double> kolmogorov_grid(double lo, double hi, int n,
                                    std::span<const double> atom_locations = {});

// phi_mu(z) = F^{(-1)}(z) - z, via damped Newton on F(w) = z from w0 = z.
Complex voiculescu_transform(const Measure& mu, Complex z, double tol = 1e-11);
Complex voiculescu_transform(const std::function<Complex(Complex)>& F, Complex z,
                             double tol = 1e-11);

}  // namespace freeclt
