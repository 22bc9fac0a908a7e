#pragma once

#include <string>
#include <vector>

#include "freeclt/entropy.hpp"
#include "freeclt/measure.hpp"

namespace freeclt {

struct ExperimentConfig {
    std::string measure_spec = "tilted_bernoulli(0.9)";
    std::string experiment = "rates";  // convolve | rates | meixner | edgeworth | formal | entropy
    std::vector<int> ns = {8, 16, 32, 64, 128, 256};
    int grid_n = kDefaultGridN;
    double eps = 1e-8;
    double tol = 1e-12;
    int kmax = 2;
    int order = 30;
    bool plots = false;
    std::string out_dir = "out";
    int threads = 0;  // 0 = auto; FREECLT_THREADS caps either way
};

void validate(const ExperimentConfig& cfg);
ExperimentConfig config_from_json_text(const std::string& text);

struct RateRow {
    int n = 0;
    double delta_w = 0.0;
    double delta_meixner = 0.0;
    double delta_kappa = 0.0;
};

struct RateReport {
    std::vector<RateRow> rows;
    double slope_w = 0.0;
    double slope_meixner = 0.0;
    double slope_kappa = 0.0;
};

// Kolmogorov distances of F_n against the semicircle, the first-order
// Meixner approximant mu_{a_n,0,0} and the kappa_n correction, with
// fitted log-log slopes (smallest two n excluded when the list has >= 5
// entries).  Also computes the distances when invoked without an output
// directory (out_dir empty writes no files).
RateReport run_rates(const ExperimentConfig& cfg);

struct EdgeworthRow {
    int n = 0;
    double resid1 = 0.0;       // sup |F_n - expansion1|
    double resid2 = 0.0;       // sup |F_n(.+a_n) - expansion2| (symmetric form when m3 = 0)
    double dens_resid = 0.0;   // max over inner 90% of |p_n(x+a_n) - v_n(x)|
};

struct EdgeworthReport {
    std::vector<EdgeworthRow> rows;
    double slope1 = 0.0;
    double slope2 = 0.0;
};

EdgeworthReport run_edgeworth(const ExperimentConfig& cfg);

struct FormalReport {
    bool b1_exact = false;
    bool b2_exact = false;
    std::string caveat;
};

FormalReport run_formal(const ExperimentConfig& cfg);

std::vector<EntropyReport> run_entropy(const ExperimentConfig& cfg);

// Density/CDF tables of mu_n per n.
void run_convolve(const ExperimentConfig& cfg);
// CLT Meixner parameter sweep: params, atom count, kappa probability flag.
void run_meixner(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment; returns a process exit status (0 = all
// enabled verdicts pass).
int run_experiment(const ExperimentConfig& cfg);

// Bounded worker pool running tasks indexed 0..count-1; assembly is
// order-preserving because tasks write into index-addressed slots.
void parallel_for_index(int count, int threads, const std::function<void(int)>& task);
int effective_threads(const ExperimentConfig& cfg, int task_count);

}  // namespace freeclt
