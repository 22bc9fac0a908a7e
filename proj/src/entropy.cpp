#include "freeclt/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "freeclt/edgeworth.hpp"
#include "freeclt/subordination.hpp"

namespace freeclt {

namespace {

// int_{lo}^{hi} p(u) f(u) log|x-u| du with the log singularity split at x.
// tanh-sinh absorbs both the log end and any sqrt/1-over-sqrt support edge.
double log_kernel_integral(const std::function<double(double)>& p, double lo, double hi,
                           double x, const std::function<double(double)>& f) {
    auto segment = [&](double a, double b, bool sing_at_a, bool sing_at_b) {
        if (!(a < b)) return 0.0;
        return tanh_sinh(
            [&](double u, double da, double db) {
                double dist = sing_at_a ? da : (sing_at_b ? db : std::abs(u - x));
                return p(u) * f(u) * std::log(dist);
            },
            a, b, 1e-13);
    };
    if (x <= lo || x >= hi) {
        // no interior singularity; still integrate log|x-u| against the edges
        return tanh_sinh(
            [&](double u, double, double) { return p(u) * f(u) * std::log(std::abs(x - u)); },
            lo, hi, 1e-13);
    }
    return segment(lo, x, false, true) + segment(x, hi, true, false);
}

// grid fallback: trapezoid away from x, analytic cell with p frozen at p(x)
// (plus linear correction) on [x-h, x+h], h = 2 * grid spacing
double log_potential_grid(const Measure& mu, double x, int k) {
    const int n = static_cast<int>(mu.density.size());
    const double h = mu.step();
    const double half = 2.0 * h;
    auto xk = [k](double u) { return k == 0 ? 1.0 : std::pow(u, k); };
    double sum = integrate_grid(mu.lo, mu.hi, mu.density, [&](double u) {
        if (std::abs(u - x) <= half) return 0.0;
        return xk(u) * std::log(std::abs(x - u));
    });
    if (x >= mu.lo - half && x <= mu.hi + half) {
        // density and weight at x by linear interpolation
        double u = std::clamp((x - mu.lo) / h, 0.0, static_cast<double>(n - 1));
        int i = std::min(static_cast<int>(u), n - 2);
        double frac = u - i;
        double px = mu.density[static_cast<size_t>(i)] * (1.0 - frac) +
                    mu.density[static_cast<size_t>(i + 1)] * frac;
        double a = std::max(mu.lo, x - half), b = std::min(mu.hi, x + half);
        // int_a^b log|x-u| du = [ (u-x) log|u-x| - u ]
        auto anti = [&](double u2) {
            double d = u2 - x;
            return (d == 0.0 ? 0.0 : d * std::log(std::abs(d))) - u2;
        };
        sum += px * xk(x) * (anti(b) - anti(a));
    }
    return sum;
}

}  // namespace

double log_potential_moment(const Measure& mu, double x, int k) {
    if (!mu.atoms.empty())
        throw SingularInputError("log_potential: atomic part present");
    if (!mu.has_ac()) throw SingularInputError("log_potential: empty measure");
    auto xk = [k](double u) { return k == 0 ? 1.0 : std::pow(u, k); };
    if (mu.density_fn) return log_kernel_integral(mu.density_fn, mu.lo, mu.hi, x, xk);
    return log_potential_grid(mu, x, k);
}

double log_potential(const Measure& mu, double x) { return log_potential_moment(mu, x, 0); }

double log_energy(const Measure& mu) {
    if (!mu.atoms.empty()) throw SingularInputError("log_energy: atomic part present");
    if (mu.density_fn) {
        auto inner = [&](double x) { return log_potential(mu, x); };
        // outer integrand is continuous with at worst sqrt-type edges
        return -tanh_sinh(
            [&](double x, double, double) { return mu.density_fn(x) * inner(x); }, mu.lo,
            mu.hi, 1e-11, 9);
    }
    return -integrate_grid(mu.lo, mu.hi, mu.density,
                           [&](double x) { return log_potential(mu, x); });
}

double free_entropy(const Measure& mu) {
    return -log_energy(mu) + 0.75 + 0.5 * std::log(2.0 * kPi);
}

double fisher_info(const Measure& mu) {
    if (!mu.has_ac()) throw SingularInputError("fisher_info: no ac part");
    if (mu.density_fn) {
        double clipped = integrate_trig(
            [&](double x) { return std::max(-mu.density_fn(x), 0.0); }, mu.lo, mu.hi);
        if (clipped > 1e-8)
            throw AccuracyError("fisher_info: negative density mass above 1e-8");
        return (4.0 * kPi * kPi / 3.0) *
               integrate_trig(
                   [&](double x) {
                       double p = std::max(mu.density_fn(x), 0.0);
                       return p * p * p;
                   },
                   mu.lo, mu.hi, 512);
    }
    return (4.0 * kPi * kPi / 3.0) *
           integrate_grid(mu.lo, mu.hi, mu.density, [&](double x) {
               double u = (x - mu.lo) / mu.step();
               int i = std::min(static_cast<int>(u),
                                static_cast<int>(mu.density.size()) - 2);
               double frac = u - i;
               double p = mu.density[static_cast<size_t>(i)] * (1.0 - frac) +
                          mu.density[static_cast<size_t>(i + 1)] * frac;
               return p * p;  // one factor comes from the grid rule itself
           });
}

double l1_distance(const std::function<double(double)>& p1,
                   const std::function<double(double)>& p2, double lo, double hi,
                   const std::vector<double>& breakpoints) {
    auto diff = [&](double x) { return p1(x) - p2(x); };
    std::vector<double> cuts{lo, hi};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    // scan for sign changes
    const int scan = 4096;
    double prev_x = lo, prev_v = diff(lo);
    for (int i = 1; i <= scan; ++i) {
        double x = lo + (hi - lo) * i / scan;
        double v = diff(x);
        if (prev_v == 0.0 || (prev_v < 0.0) != (v < 0.0)) {
            // bisect the bracket
            double a = prev_x, b = x, fa = prev_v;
            for (int it = 0; it < 70; ++it) {
                double m = 0.5 * (a + b);
                double fm = diff(m);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            cuts.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        total += std::abs(tanh_sinh([&](double x, double, double) { return diff(x); }, a, b,
                                    1e-11, 9));
    }
    return total;
}

std::vector<EntropyReport> clt_entropy_sweep(const Measure& mu, const std::vector<int>& ns,
                                             int grid_n, double eps, bool convergence_guard) {
    double m3 = moment(mu, 3);
    const double chi_w = 0.5 * std::log(2.0 * kPi * std::exp(1.0));
    std::vector<EntropyReport> out;
    bool guarded = false;
    for (int n : ns) {
        Measure mn = clt_measure(mu, n, grid_n, eps);
        if (!mn.atoms.empty())
            throw SingularInputError("clt_entropy_sweep: mu_n carries an atom at n = " +
                                     std::to_string(n) + "; entropy integrals need larger n");
        EntropyReport r;
        r.n = n;
        r.chi = free_entropy(mn);
        if (convergence_guard && !guarded) {
            guarded = true;
            Measure fine = clt_measure(mu, n, 2 * grid_n, 0.5 * eps);
            double chi_fine = free_entropy(fine);
            if (std::abs(chi_fine - r.chi) >= 1e-5)
                throw AccuracyError("clt_entropy_sweep: chi moved by " +
                                    std::to_string(std::abs(chi_fine - r.chi)) +
                                    " under grid/eps refinement");
        }
        r.log_energy = log_energy(mn);
        r.fisher = fisher_info(mn);
        auto pw = [](double x) { return semicircle_density(x); };
        auto pn = mn.density_fn;
        r.l1_to_semicircle =
            l1_distance(pn, pw, std::min(mn.lo, -2.0), std::max(mn.hi, 2.0), {-2.0, 2.0, mn.lo, mn.hi});
        r.gap_chi = n * (chi_w - r.chi);
        r.gap_fisher = n * (r.fisher - 1.0);
        r.gap_l1 = (std::abs(m3) > 1e-9 ? std::sqrt(static_cast<double>(n)) : n) *
                   r.l1_to_semicircle;
        out.push_back(r);
    }
    return out;
}

}  // namespace freeclt
