#pragma once

#include <string>
#include <vector>

#include "freeclt/measure.hpp"

namespace freeclt {

// Centered free Meixner family mu_{a,b,d}, a in R, b < 1, d < 1, defined by
//   1/G(z) = a + ((1+b)(z-a) + sqrt((1-b)^2 (z-a)^2 - 4(1-d)))/2
// with the square-root branch mapping C+ into {Im >= 0}.
struct MeixnerParams {
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;
};

void validate(const MeixnerParams& p);

// Parameters of the CLT approximant built from standardized moments:
// a_n = m3/sqrt(n), b_n = (m4 - m3^2 - 1)/n, d_n = (m4 - m3^2)/n,
// e_n = (1 - b_n)/sqrt(1 - d_n).
struct CltParams {
    int n = 0;
    double a_n = 0.0;
    double b_n = 0.0;
    double d_n = 0.0;
    double e_n = 1.0;
};

CltParams clt_params(const MomentSummary& ms, int n);
CltParams clt_params(double m3, double m4, int n);

// Support radius of the ac part around a: 2 sqrt(1-d)/(1-b).
double meixner_support_radius(const MeixnerParams& p);

// Density of the ac part at x (0 outside the support interval).
double meixner_density(const MeixnerParams& p, double x);

// Discrete part: two candidate atoms at the roots of
// f(x) = b x^2 + a(1-b) x + (1-d) when b != 0 and the discriminant is
// positive, one candidate at -(1-d)/a when b = 0, a != 0; weights are
// clamped at zero and tiny positives (< 1e-14) are dropped.
std::vector<Atom> meixner_atoms(const MeixnerParams& p);

// Reciprocal Cauchy transform in closed form.
Complex meixner_reciprocal_transform(const MeixnerParams& p, Complex z);

// Assembled measure (density grid + atoms + closed-form evaluators).
Measure meixner_measure(const MeixnerParams& p, int grid_n = kDefaultGridN);

// Saitoh-Yoshida subfamily label (semicircle / free-poisson / free-pascal /
// free-gamma / pure-meixner / shifted-free-poisson).
std::string meixner_family_label(const MeixnerParams& p);

// Density of the signed correction term:
// (e_n^2 (x-a_n)^2 - 1) p_w(e_n (x-a_n)); integrates to zero.
double varsigma_density(const CltParams& p, double x);
// Closed-form cumulative of the correction term.
double varsigma_cdf(const CltParams& p, double x);

// kappa_n = mu_{a_n,b_n,d_n} + (1/n) varsigma_n as a signed density with
// total mass one.  is_probability reports whether the combined density is
// pointwise >= -1e-12 on the grid.
struct KappaMeasure {
    SignedDensity density;
    bool is_probability = false;
};

KappaMeasure kappa_measure(const CltParams& p, int grid_n = kDefaultGridN);

}  // namespace freeclt
