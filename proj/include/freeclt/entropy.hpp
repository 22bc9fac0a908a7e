#pragma once

#include <vector>

#include "freeclt/measure.hpp"

namespace freeclt {

// int log|x - u| dmu(u) for an absolutely continuous mu (atoms rejected:
// the kernel is not integrable against point masses).
double log_potential(const Measure& mu, double x);
// Same with the integrand weighted by u^k (k = 0 reproduces log_potential).
double log_potential_moment(const Measure& mu, double x, int k);

// E(mu) = -int int log|x - y| dmu(x) dmu(y); E(semicircle) = 1/4.
double log_energy(const Measure& mu);

// chi(mu) = int int log|x-y| + 3/4 + log(2 pi)/2; maximized by the
// standard semicircle at log(2 pi e)/2 among variance-one laws.
double free_entropy(const Measure& mu);

// Phi(mu) = (4 pi^2 / 3) int p^3; Phi(semicircle) = 1.
double fisher_info(const Measure& mu);

// int |p1 - p2| over [lo, hi], with sign changes bracketed and refined so
// each smooth piece is integrated separately.  Extra breakpoints (support
// edges of either density) can be supplied.
double l1_distance(const std::function<double(double)>& p1,
                   const std::function<double(double)>& p2, double lo, double hi,
                   const std::vector<double>& breakpoints = {});

struct EntropyReport {
    int n = 0;
    double chi = 0.0;
    double log_energy = 0.0;
    double fisher = 0.0;
    double l1_to_semicircle = 0.0;
    double gap_chi = 0.0;     // n (chi(w) - chi(mu_n))
    double gap_fisher = 0.0;  // n (Phi(mu_n) - 1)
    double gap_l1 = 0.0;      // sqrt(n) L1 when m3 != 0, else n L1
};

// For each n: build mu_n by subordination, compute chi / Phi / L1 against
// the semicircle and the scaled CLT gaps.  The first n additionally runs a
// convergence guard: doubling grid_n and halving eps must move chi by less
// than 1e-5.
std::vector<EntropyReport> clt_entropy_sweep(const Measure& mu, const std::vector<int>& ns,
                                             int grid_n = 8001, double eps = 1e-8,
                                             bool convergence_guard = true);

}  // namespace freeclt
