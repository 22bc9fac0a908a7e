#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeclt/errors.hpp"
#include "freeclt/numerics.hpp"

namespace freeclt {

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

// Universal carrier for the measures handled by this toolkit: finitely many
// atoms plus an absolutely continuous part sampled on a uniform grid over a
// compact interval.  Presets and derived measures additionally carry closed
// form evaluators for the density and the Cauchy transform; the grid is the
// portable (serializable) representation, the evaluators are what the high
// accuracy quadratures consume.
struct Measure {
    std::vector<Atom> atoms;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density;  // >= 2 samples when an ac part is present

    std::function<double(double)> density_fn;          // optional
    std::function<Complex(Complex)> cauchy_fn;         // optional
    std::string label;

    bool has_ac() const { return density.size() >= 2; }
    double step() const { return (hi - lo) / static_cast<double>(density.size() - 1); }
    // Radius of the support: sup{|x| : x in supp}.
    double support_radius() const;
};

// Gridded density allowed to go negative; carrier for the signed correction
// term and the expansion approximants.
struct SignedDensity {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> values;
    std::vector<Atom> atoms;  // weights may be negative
    std::function<double(double)> density_fn;  // optional
    std::string label;
};

struct MomentSummary {
    std::vector<double> moments;              // m_0 .. m_K
    std::map<double, double> abs_moments;     // beta_q keyed by q
    std::vector<double> cumulants;            // alpha_1 .. alpha_K

    double m(int k) const { return moments.at(static_cast<size_t>(k)); }
    double alpha(int k) const { return cumulants.at(static_cast<size_t>(k) - 1); }
    double beta(double q) const { return abs_moments.at(q); }
};

// ---- validity ----

// Throws std::invalid_argument when a structural invariant fails
// (negative weights, non-increasing atom locations, bad support) and
// AccuracyError when the total mass is farther than 1e-8 from 1.
void validate(const Measure& mu);
double total_mass(const Measure& mu);

double total_mass(const SignedDensity& d);
double total_variation(const SignedDensity& d);

// ---- integration against a measure ----

// Integral of f against the ac part only, using the best available scheme:
// trigonometric Gauss-Legendre on the closed-form density when present,
// otherwise a grid rule with power-law corrected edge cells.
double integrate_ac(const Measure& mu, const std::function<double(double)>& f);
double integrate(const Measure& mu, const std::function<double(double)>& f);
double integrate(const SignedDensity& d, const std::function<double(double)>& f);

// Grid rule used for plain sampled densities: composite Simpson inside,
// per-cell power-law fit in the outermost 2% of the support (handles both
// sqrt and inverse-sqrt edge behavior).
double integrate_grid(double lo, double hi, const std::vector<double>& values,
                      const std::function<double(double)>& f);

// ---- operations ----

double moment(const Measure& mu, int k);
double abs_moment(const Measure& mu, double q);

// rho_q(mu, t): q-th absolute moment outside [-t, t].
double tail_moment(const Measure& mu, double q, double t);

// L_qn = beta_q / n^{(q-2)/2}
double lyapunov_fraction(const Measure& mu, double q, int n);

// eta_qs(n): minimum of g_{qns}(eps) = eps^{s+2-q_s} +
// rho_{q_s}(mu, eps*sqrt(n))/beta_{q_s} * eps^{-q_s} over a 200-point
// geometric grid in (0, 10^{-1/2}], with q_s = min(q, s+2).
double eta_qs(const Measure& mu, double q, int s, int n);

// Free cumulants alpha_1..alpha_K from raw moments m_1..m_K, by series
// reversion of the reciprocal Cauchy transform.
std::vector<double> cumulants_from_moments(const std::vector<double>& ms);

MomentSummary moment_summary(const Measure& mu, int K, const std::vector<double>& qs = {});

// Affine pushforward x -> s*x + t (s != 0).
Measure affine_pushforward(const Measure& mu, double s, double t);
Measure scale(const Measure& mu, double c);
// Mean zero, variance one; rejects Dirac-type inputs.
Measure standardize(const Measure& mu);

// ---- presets & serialization ----

inline constexpr int kDefaultGridN = 4001;

Measure bernoulli();                       // (delta_{-1} + delta_{+1})/2
Measure tilted_bernoulli(double p);        // two-point, mean 0, variance 1
Measure semicircle(int grid_n = kDefaultGridN);
Measure arcsine(int grid_n = kDefaultGridN);   // equilibrium measure of [-2, 2]

Measure measure_from_json_text(const std::string& text);
std::string measure_to_json_text(const Measure& mu);
// Preset name ("bernoulli", "semicircle", "arcsine", "tilted_bernoulli(0.9)")
// or a path to a JSON file with the documented schema.
Measure parse_measure_spec(const std::string& spec);

}  // namespace freeclt
