#include "freeclt/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"

#include "freeclt/edgeworth.hpp"
#include "freeclt/formal_series.hpp"
#include "freeclt/meixner.hpp"
#include "freeclt/subordination.hpp"
#include "freeclt/transform.hpp"

namespace freeclt {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& out_dir, const std::string& name, const std::string& text) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/" + name, std::ios::binary);
    out << text;
}

// csv -> gnuplot .dat: commas become spaces, header line gets commented
void maybe_write_dat(const ExperimentConfig& cfg, const std::string& name,
                     const std::string& csv) {
    if (!cfg.plots) return;
    std::string dat = "# ";
    for (char c : csv) dat += (c == ',') ? ' ' : c;
    write_text(cfg.out_dir, name, dat);
}

Measure load_standardized(const ExperimentConfig& cfg) {
    Measure mu = parse_measure_spec(cfg.measure_spec);
    double m1 = moment(mu, 1);
    double m2 = moment(mu, 2);
    if (std::abs(m1) > 1e-9 || std::abs(m2 - 1.0) > 1e-9) mu = standardize(mu);
    return mu;
}

std::vector<double> log_of(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = std::log(v[i]);
    return r;
}

// slope over (log n, log y), dropping the two smallest n when >= 5 samples
double rate_slope(const std::vector<int>& ns, const std::vector<double>& ys) {
    size_t skip = ns.size() >= 5 ? 2 : 0;
    std::vector<double> xs;
    std::vector<double> vals;
    for (size_t i = skip; i < ns.size(); ++i) {
        xs.push_back(std::log(static_cast<double>(ns[i])));
        vals.push_back(ys[i]);
    }
    return fit_slope(xs, log_of(vals));
}

}  // namespace

int effective_threads(const ExperimentConfig& cfg, int task_count) {
    int t = cfg.threads > 0 ? cfg.threads
                            : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (const char* env = std::getenv("FREECLT_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) t = std::min(t, cap);
    }
    return std::max(1, std::min(t, task_count));
}

void parallel_for_index(int count, int threads, const std::function<void(int)>& task) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void validate(const ExperimentConfig& cfg) {
    for (size_t i = 1; i < cfg.ns.size(); ++i)
        if (!(cfg.ns[i - 1] < cfg.ns[i]))
            throw std::invalid_argument("config: ns must be strictly increasing");
    if (!(cfg.eps > 0.0) || !(cfg.tol > 0.0))
        throw std::invalid_argument("config: tolerances must be > 0");
    if (cfg.grid_n < 3) throw std::invalid_argument("config: grid_n >= 3");
    if (cfg.kmax < 1 || cfg.kmax > 6) throw std::invalid_argument("config: kmax in [1,6]");
    if (cfg.order < 10) throw std::invalid_argument("config: order >= 10");
    static const char* kinds[] = {"convolve", "rates", "meixner", "edgeworth", "formal", "entropy"};
    bool ok = false;
    for (const char* k : kinds) ok = ok || cfg.experiment == k;
    if (!ok) throw std::invalid_argument("config: unknown experiment " + cfg.experiment);
}

ExperimentConfig config_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("measure")) cfg.measure_spec = j["measure"].get<std::string>();
    if (j.contains("experiment")) cfg.experiment = j["experiment"].get<std::string>();
    if (j.contains("ns")) cfg.ns = j["ns"].get<std::vector<int>>();
    if (j.contains("grid_n")) cfg.grid_n = j["grid_n"].get<int>();
    if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("kmax")) cfg.kmax = j["kmax"].get<int>();
    if (j.contains("order")) cfg.order = j["order"].get<int>();
    if (j.contains("plots")) cfg.plots = j["plots"].get<bool>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    validate(cfg);
    return cfg;
}

RateReport run_rates(const ExperimentConfig& cfg) {
    Measure mu = load_standardized(cfg);
    MomentSummary ms = moment_summary(mu, 4);
    const int count = static_cast<int>(cfg.ns.size());

    RateReport rep;
    rep.rows.resize(static_cast<size_t>(count));
    parallel_for_index(count, effective_threads(cfg, count), [&](int i) {
        int n = cfg.ns[static_cast<size_t>(i)];
        Measure mn = clt_measure(mu, n, cfg.grid_n, cfg.eps, cfg.tol);
        Cdf Fn = cdf_from_density(mn);
        CltParams p = clt_params(ms, n);

        Measure mx1 = meixner_measure({p.a_n, 0.0, 0.0}, 20001);
        Cdf Fm = cdf_from_density(mx1);
        Measure mx2 = meixner_measure({p.a_n, p.b_n, p.d_n}, 20001);
        Cdf Fmx2 = cdf_from_density(mx2);
        auto Fk = [Fmx2, p](double x) { return Fmx2(x) + varsigma_cdf(p, x) / p.n; };

        std::vector<double> atom_locs;
        for (const auto& a : mn.atoms) atom_locs.push_back(a.location);
        double lo = std::min({mn.lo, mx1.lo, -2.0});
        double hi = std::max({mn.hi, mx1.hi, 2.0});
        auto grid = kolmogorov_grid(lo, hi, 20001, atom_locs);

        RateRow row;
        row.n = n;
        row.delta_w = kolmogorov_distance(Fn, semicircle_cdf, grid);
        row.delta_meixner = kolmogorov_distance(Fn, Fm, grid);
        row.delta_kappa = kolmogorov_distance(Fn, Fk, grid);
        rep.rows[static_cast<size_t>(i)] = row;
    });

    std::vector<double> dw, dm, dk;
    for (const auto& r : rep.rows) {
        dw.push_back(r.delta_w);
        dm.push_back(r.delta_meixner);
        dk.push_back(r.delta_kappa);
    }
    rep.slope_w = rate_slope(cfg.ns, dw);
    rep.slope_meixner = rate_slope(cfg.ns, dm);
    rep.slope_kappa = rate_slope(cfg.ns, dk);

    std::string csv = "n,delta_w,delta_meixner,delta_kappa\n";
    for (const auto& r : rep.rows)
        csv += std::to_string(r.n) + "," + fmt(r.delta_w) + "," + fmt(r.delta_meixner) + "," +
               fmt(r.delta_kappa) + "\n";
    csv += "slope," + fmt(rep.slope_w) + "," + fmt(rep.slope_meixner) + "," +
           fmt(rep.slope_kappa) + "\n";
    write_text(cfg.out_dir, "rates.csv", csv);
    maybe_write_dat(cfg, "rates.dat", csv);
    return rep;
}

EdgeworthReport run_edgeworth(const ExperimentConfig& cfg) {
    Measure mu = load_standardized(cfg);
    MomentSummary ms = moment_summary(mu, 4);
    const double m3 = ms.m(3), m4 = ms.m(4);
    const bool symmetric = std::abs(m3) < 1e-12;
    const int count = static_cast<int>(cfg.ns.size());

    EdgeworthReport rep;
    rep.rows.resize(static_cast<size_t>(count));
    std::vector<std::string> tables(static_cast<size_t>(count));

    parallel_for_index(count, effective_threads(cfg, count), [&](int i) {
        int n = cfg.ns[static_cast<size_t>(i)];
        CltParams p = clt_params(ms, n);
        Measure mn = clt_measure(mu, n, cfg.grid_n, cfg.eps, cfg.tol);
        Cdf Fn = cdf_from_density(mn);

        EdgeworthRow row;
        row.n = n;
        const int npts = 4001;
        double lo = mn.lo, hi = mn.hi;
        std::string table = "x,F_n,expansion1,expansion2,p_n_shifted,v_n\n";
        for (int j = 0; j < npts; ++j) {
            double x = lo + (hi - lo) * j / (npts - 1.0);
            double e1 = expansion1_cdf(x, p.a_n);
            double e2 = symmetric ? expansion2_symmetric_cdf(x, m4, n)
                                  : expansion2_shifted_cdf(x, p);
            double fn_at = Fn(x);
            double fn_sh = symmetric ? fn_at : Fn(x + p.a_n);
            row.resid1 = std::max(row.resid1, std::abs(fn_at - e1));
            row.resid2 = std::max(row.resid2, std::abs(fn_sh - e2));
            double pn_sh = std::numeric_limits<double>::quiet_NaN();
            double vn = std::numeric_limits<double>::quiet_NaN();
            if (std::abs(x) <= 0.9 * 2.0 / p.e_n) {
                pn_sh = mn.density_fn(x + p.a_n);
                vn = density_expansion(x, p);
                row.dens_resid = std::max(row.dens_resid, std::abs(pn_sh - vn));
            }
            if ((j % 10) == 0)
                table += fmt(x) + "," + fmt(fn_at) + "," + fmt(e1) + "," + fmt(e2) + "," +
                         fmt(pn_sh) + "," + fmt(vn) + "\n";
        }
        rep.rows[static_cast<size_t>(i)] = row;
        tables[static_cast<size_t>(i)] = table;
    });

    for (int i = 0; i < count; ++i)
        write_text(cfg.out_dir, "edgeworth_n" + std::to_string(cfg.ns[static_cast<size_t>(i)]) + ".csv",
                   tables[static_cast<size_t>(i)]);

    std::vector<double> r1, r2;
    for (const auto& r : rep.rows) {
        r1.push_back(r.resid1);
        r2.push_back(r.resid2);
    }
    rep.slope1 = rate_slope(cfg.ns, r1);
    rep.slope2 = rate_slope(cfg.ns, r2);

    std::string csv = "n,sup_resid_order1,sup_resid_order2,max_density_resid\n";
    for (const auto& r : rep.rows)
        csv += std::to_string(r.n) + "," + fmt(r.resid1) + "," + fmt(r.resid2) + "," +
               fmt(r.dens_resid) + "\n";
    csv += "slope," + fmt(rep.slope1) + "," + fmt(rep.slope2) + ",\n";
    write_text(cfg.out_dir, "edgeworth_summary.csv", csv);
    maybe_write_dat(cfg, "edgeworth_summary.dat", csv);
    return rep;
}

FormalReport run_formal(const ExperimentConfig& cfg) {
    ClosedFormReport rep = verify_closed_forms(cfg.order);
    FormalReport out;
    out.b1_exact = rep.b1_exact;
    out.b2_exact = rep.b2_exact;
    out.caveat = rep.caveat;

    FormalLaurentSeries g = solve_g(cfg.order + 2 * cfg.kmax);
    FormalLaurentSeries ginv = revert_g(g, cfg.order + 2 * cfg.kmax);
    auto bks = collect_Bk(ginv, cfg.kmax, cfg.order);
    for (int k = 1; k <= cfg.kmax; ++k)
        write_text(cfg.out_dir, "formal_B" + std::to_string(k) + ".csv",
                   bk_table_csv(bks[static_cast<size_t>(k - 1)]));

    std::string verdict = "check,verdict\n";
    verdict += std::string("B1_vs_closed_form,") + (rep.b1_exact ? "exact match" : "MISMATCH") + "\n";
    verdict += std::string("B2_vs_closed_form,") + (rep.b2_exact ? "exact match" : "MISMATCH") + "\n";
    verdict += "caveat," + rep.caveat + "\n";
    write_text(cfg.out_dir, "formal_verdict.csv", verdict);
    return out;
}

std::vector<EntropyReport> run_entropy(const ExperimentConfig& cfg) {
    Measure mu = load_standardized(cfg);
    int grid_n = std::max(cfg.grid_n, 8001);
    auto reports = clt_entropy_sweep(mu, cfg.ns, grid_n, cfg.eps);
    std::string csv = "n,chi,fisher,l1,gap_chi,gap_fisher,gap_l1\n";
    for (const auto& r : reports)
        csv += std::to_string(r.n) + "," + fmt(r.chi) + "," + fmt(r.fisher) + "," +
               fmt(r.l1_to_semicircle) + "," + fmt(r.gap_chi) + "," + fmt(r.gap_fisher) + "," +
               fmt(r.gap_l1) + "\n";
    write_text(cfg.out_dir, "entropy.csv", csv);
    maybe_write_dat(cfg, "entropy.dat", csv);
    return reports;
}

void run_convolve(const ExperimentConfig& cfg) {
    Measure mu = load_standardized(cfg);
    const int count = static_cast<int>(cfg.ns.size());
    std::vector<std::string> tables(static_cast<size_t>(count));
    parallel_for_index(count, effective_threads(cfg, count), [&](int i) {
        int n = cfg.ns[static_cast<size_t>(i)];
        Measure mn = clt_measure(mu, n, cfg.grid_n, cfg.eps, cfg.tol);
        Cdf Fn = cdf_from_density(mn);
        std::string t = "x,density,cdf\n";
        const double h = (mn.hi - mn.lo) / (cfg.grid_n - 1);
        for (int j = 0; j < cfg.grid_n; ++j) {
            double x = mn.lo + j * h;
            t += fmt(x) + "," + fmt(mn.density[static_cast<size_t>(j)]) + "," + fmt(Fn(x)) + "\n";
        }
        tables[static_cast<size_t>(i)] = t;
    });
    for (int i = 0; i < count; ++i)
        write_text(cfg.out_dir, "convolve_n" + std::to_string(cfg.ns[static_cast<size_t>(i)]) + ".csv",
                   tables[static_cast<size_t>(i)]);
}

void run_meixner(const ExperimentConfig& cfg) {
    Measure mu = load_standardized(cfg);
    MomentSummary ms = moment_summary(mu, 4);
    std::string csv = "n,a_n,b_n,d_n,e_n,atom_count,kappa_is_probability,kappa_mass\n";
    for (int n : cfg.ns) {
        CltParams p = clt_params(ms, n);
        Measure mx = meixner_measure({p.a_n, p.b_n, p.d_n}, cfg.grid_n);
        KappaMeasure kp = kappa_measure(p, cfg.grid_n);
        double mass = total_mass(kp.density);
        csv += std::to_string(n) + "," + fmt(p.a_n) + "," + fmt(p.b_n) + "," + fmt(p.d_n) +
               "," + fmt(p.e_n) + "," + std::to_string(mx.atoms.size()) + "," +
               (kp.is_probability ? "true" : "false") + "," + fmt(mass) + "\n";
    }
    write_text(cfg.out_dir, "meixner.csv", csv);
}

int run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.experiment == "rates") {
        run_rates(cfg);
        return 0;
    }
    if (cfg.experiment == "edgeworth") {
        run_edgeworth(cfg);
        return 0;
    }
    if (cfg.experiment == "formal") {
        FormalReport rep = run_formal(cfg);
        return (rep.b1_exact && rep.b2_exact) ? 0 : 1;
    }
    if (cfg.experiment == "entropy") {
        run_entropy(cfg);
        return 0;
    }
    if (cfg.experiment == "convolve") {
        run_convolve(cfg);
        return 0;
    }
    if (cfg.experiment == "meixner") {
        run_meixner(cfg);
        return 0;
    }
    return 2;
}

}  // namespace freeclt
