#pragma once

#include <map>
#include <mutex>

#include "freeclt/measure.hpp"
#include "freeclt/transform.hpp"

namespace freeclt {

struct SubordinationStats {
    long queries = 0;
    long picard_steps = 0;
    long newton_steps = 0;
    double max_residual = 0.0;
};

// Solver state for the functional equation z = n Z(z) - (n-1) F_mu(Z(z)),
// whose unique class-F solution subordinates the n-fold free convolution
// power: F_{mu^{n boxplus}} = F_mu o Z.
//
// Scheme: Picard iteration of T(w) = z/n + ((n-1)/n) F_mu(w) from w0 = z
// (T is a self-map of {Im w >= Im z}, so the iteration contracts towards
// the unique fixed point); if the step norm has not reached tolerance
// after 500 steps -- which happens close to the spectral edges, where the
// contraction factor degrades to 1 - O(1/n) -- switch to damped Newton,
// keeping iterates in the upper half-plane.
//
// The residual is evaluated in the rearranged form
//     (z - w) - (n-1) * (F_mu(w) - w),
// with F_mu(w) - w = -xkernel(w)/G_mu(w); the naive form n*w - (n-1)F - z
// cancels n*|w| down to |z| and cannot reach 1e-12 in doubles.
class SubordinationSolution {
public:
    SubordinationSolution(Measure base, int n, double tol = 1e-12, bool memoize = true);

    Complex Z(Complex z) const;
    // Same fixed point, started from a caller-provided guess (grid sweeps
    // warm-start from the neighbouring point).
    Complex Z_from(Complex z, Complex w0) const;
    // Cauchy transform of mu^{n boxplus}: 1 / F_mu(Z(z)).
    Complex G(Complex z) const;
    Complex F_base(Complex w) const;

    // Residual tolerance actually enforced at z: tol floored by the
    // cancellation limit of double arithmetic at this magnitude.
    double effective_tol(Complex z) const;

    int n() const { return n_; }
    double tol() const { return tol_; }
    const Measure& base() const { return base_; }
    SubordinationStats stats() const;

    enum class BoundCheck { holds, violated, inapplicable };
    // Lemma-type diagnostic |Z(z)| >= sqrt((n-1)/8) over all memoized
    // queries; requires a standardized base with small enough tail and
    // n >= 10^3, otherwise reports inapplicable.
    BoundCheck z_lower_bound_check() const;

private:
    Complex solve(Complex z, Complex w0) const;

    Measure base_;
    int n_;
    double tol_;
    bool memoize_;
    mutable std::map<std::pair<double, double>, Complex> memo_;
    mutable std::mutex mutex_;
    mutable SubordinationStats stats_;
};

Complex solve_Z(const Measure& mu, int n, Complex z, double tol = 1e-12);
Complex convolution_power_G(const Measure& mu, int n, Complex z, double tol = 1e-12);

// Distribution of (X_1 + ... + X_n)/sqrt(n) for free copies X_i ~ mu:
// density recovered by Stieltjes-Perron inversion of
// sqrt(n) G_{mu^{n boxplus}}(sqrt(n)(x + i eps)) on a grid_n-point grid over
// [-2 - L/sqrt(n), 2 + L/sqrt(n)], renormalized to unit mass. Atoms of the
// power (present when a base atom of weight w has n*w - (n-1) > 0) are
// emitted as atoms and removed from the inversion.
Measure clt_measure(const Measure& mu, int n, int grid_n = kDefaultGridN, double eps = 1e-8,
                    double tol = 1e-12);

}  // namespace freeclt
