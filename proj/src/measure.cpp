#include "freeclt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace freeclt {

namespace {

std::vector<double> sample_density(double lo, double hi, int n,
                                   const std::function<double(double)>& fn) {
    std::vector<double> v(static_cast<size_t>(n));
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        double x = (i == n - 1) ? hi : lo + i * h;
        double p = fn(x);
        v[static_cast<size_t>(i)] = std::isfinite(p) && p > 0.0 ? p : 0.0;
    }
    return v;
}

// Mass and f-weighted mass of one cell under the local model p = A*(x-x0)^g,
// with x0 the support edge the zone is attached to.  t0 < t1 are the cell
// endpoints measured from x0, p0 = p(t0) (ignored when t0 == 0), p1 = p(t1).
double power_cell(double t0, double t1, double p0, double p1, double gamma, double edge,
                  double sign, const std::function<double(double)>& f) {
    // A t^g matched at t1
    double A = p1 / std::pow(t1, gamma);
    double mass, centroid;
    if (t0 <= 0.0) {
        mass = A * std::pow(t1, gamma + 1.0) / (gamma + 1.0);
        centroid = t1 * (gamma + 1.0) / (gamma + 2.0);
    } else {
        (void)p0;
        double m1 = std::pow(t1, gamma + 1.0), m0 = std::pow(t0, gamma + 1.0);
        mass = A * (m1 - m0) / (gamma + 1.0);
        centroid = ((gamma + 1.0) / (gamma + 2.0)) *
                   (std::pow(t1, gamma + 2.0) - std::pow(t0, gamma + 2.0)) / (m1 - m0);
    }
    return mass * f(edge + sign * centroid);
}

}  // namespace

double Measure::support_radius() const {
    double r = 0.0;
    for (const auto& a : atoms) r = std::max(r, std::abs(a.location));
    if (has_ac()) r = std::max({r, std::abs(lo), std::abs(hi)});
    return r;
}

double integrate_grid(double lo, double hi, const std::vector<double>& values,
                      const std::function<double(double)>& f) {
    const int n = static_cast<int>(values.size());
    if (n < 2) return 0.0;
    const double h = (hi - lo) / (n - 1);
    auto x = [&](int i) { return lo + i * h; };

    // edge zone: outermost 2% of the cells, at least 2 per side
    int zone = std::max(2, static_cast<int>(0.02 * (n - 1)));
    zone = std::min(zone, (n - 1) / 2);

    double sum = 0.0;
    // left zone, model p = A (x-lo)^gamma per cell
    for (int i = 0; i < zone; ++i) {
        double t0 = i * h, t1 = (i + 1) * h;
        double pa = values[static_cast<size_t>(i)], pb = values[static_cast<size_t>(i + 1)];
        double pn = (i + 2 < n) ? values[static_cast<size_t>(i + 2)] : pb;
        double gamma;
        if (i == 0) {
            gamma = (pb > 0.0 && pn > 0.0) ? std::log(pn / pb) / std::log(2.0) : 0.0;
        } else {
            gamma = (pa > 0.0 && pb > 0.0) ? std::log(pb / pa) / std::log(t1 / t0) : 0.0;
        }
        if (pb > 0.0 && std::isfinite(gamma) && gamma > -0.95 && gamma < 4.0) {
            sum += power_cell(t0, t1, pa, pb, gamma, lo, +1.0, f);
        } else {
            sum += 0.5 * h * (pa * f(x(i)) + pb * f(x(i + 1)));
        }
    }
    // right zone, model p = A (hi-x)^gamma per cell
    for (int i = n - 1 - zone; i < n - 1; ++i) {
        double t1 = (n - 1 - i) * h, t0 = t1 - h;  // distances from hi
        double pa = values[static_cast<size_t>(i + 1)], pb = values[static_cast<size_t>(i)];
        double pn = (i - 1 >= 0) ? values[static_cast<size_t>(i - 1)] : pb;
        double gamma;
        if (i == n - 2) {
            gamma = (pb > 0.0 && pn > 0.0) ? std::log(pn / pb) / std::log(2.0) : 0.0;
        } else {
            gamma = (pa > 0.0 && pb > 0.0) ? std::log(pb / pa) / std::log(t1 / t0) : 0.0;
        }
        if (pb > 0.0 && std::isfinite(gamma) && gamma > -0.95 && gamma < 4.0) {
            sum += power_cell(t0, t1, pa, pb, gamma, hi, -1.0, f);
        } else {
            sum += 0.5 * h * (pa * f(x(i + 1)) + pb * f(x(i)));
        }
    }
    // interior: composite Simpson over [zone, n-1-zone]
    int i0 = zone, i1 = n - 1 - zone;
    auto g = [&](int i) { return values[static_cast<size_t>(i)] * f(x(i)); };
    int i = i0;
    while (i + 2 <= i1) {
        sum += h / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
        i += 2;
    }
    if (i + 1 <= i1) sum += 0.5 * h * (g(i) + g(i + 1));
    return sum;
}

double integrate_ac(const Measure& mu, const std::function<double(double)>& f) {
    if (!mu.has_ac()) return 0.0;
    if (mu.density_fn) {
        return integrate_trig([&](double u) { return mu.density_fn(u) * f(u); }, mu.lo, mu.hi);
    }
    return integrate_grid(mu.lo, mu.hi, mu.density, f);
}

double integrate(const Measure& mu, const std::function<double(double)>& f) {
    double sum = integrate_ac(mu, f);
    for (const auto& a : mu.atoms) sum += a.weight * f(a.location);
    return sum;
}

double integrate(const SignedDensity& d, const std::function<double(double)>& f) {
    double sum = 0.0;
    if (d.values.size() >= 2) {
        if (d.density_fn) {
            sum = integrate_trig([&](double u) { return d.density_fn(u) * f(u); }, d.lo, d.hi);
        } else {
            const int n = static_cast<int>(d.values.size());
            const double h = (d.hi - d.lo) / (n - 1);
            auto g = [&](int i) { return d.values[static_cast<size_t>(i)] * f(d.lo + i * h); };
            int i = 0;
            while (i + 2 <= n - 1) {
                sum += h / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
                i += 2;
            }
            if (i + 1 <= n - 1) sum += 0.5 * h * (g(i) + g(i + 1));
        }
    }
    for (const auto& a : d.atoms) sum += a.weight * f(a.location);
    return sum;
}

double total_mass(const Measure& mu) {
    return integrate(mu, [](double) { return 1.0; });
}

double total_mass(const SignedDensity& d) {
    return integrate(d, [](double) { return 1.0; });
}

double total_variation(const SignedDensity& d) {
    SignedDensity abs = d;
    for (auto& v : abs.values) v = std::abs(v);
    if (d.density_fn) {
        auto fn = d.density_fn;
        abs.density_fn = [fn](double x) { return std::abs(fn(x)); };
    }
    abs.atoms.clear();
    double tv = integrate(abs, [](double) { return 1.0; });
    for (const auto& a : d.atoms) tv += std::abs(a.weight);
    return tv;
}

void validate(const Measure& mu) {
    for (size_t i = 0; i < mu.atoms.size(); ++i) {
        if (mu.atoms[i].weight < 0.0)
            throw std::invalid_argument("measure: atom weight < 0");
        if (i > 0 && !(mu.atoms[i - 1].location < mu.atoms[i].location))
            throw std::invalid_argument("measure: atom locations must be strictly increasing");
    }
    if (mu.density.size() == 1) throw std::invalid_argument("measure: grid needs >= 2 samples");
    if (mu.has_ac() && !(mu.lo < mu.hi))
        throw std::invalid_argument("measure: ac support needs lo < hi");
    for (double v : mu.density)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("measure: density values must be finite and >= 0");
    double mass = total_mass(mu);
    if (std::abs(mass - 1.0) > 1e-8)
        throw AccuracyError("measure: total mass " + std::to_string(mass) +
                            " outside [1-1e-8, 1+1e-8]");
}

double moment(const Measure& mu, int k) {
    if (k < 0) throw std::invalid_argument("moment: k >= 0 required");
    return integrate(mu, [k](double x) { return std::pow(x, k); });
}

double abs_moment(const Measure& mu, double q) {
    if (q < 0.0) throw std::invalid_argument("abs_moment: q >= 0 required");
    double sum = 0.0;
    for (const auto& a : mu.atoms) sum += a.weight * std::pow(std::abs(a.location), q);
    if (!mu.has_ac()) return sum;
    // split at zero: |x|^q has a kink there
    auto f = [q](double x) { return std::pow(std::abs(x), q); };
    if (mu.lo < 0.0 && mu.hi > 0.0 && mu.density_fn) {
        auto g = [&](double x, double, double) { return mu.density_fn(x) * f(x); };
        sum += tanh_sinh(g, mu.lo, 0.0) + tanh_sinh(g, 0.0, mu.hi);
    } else {
        sum += integrate_ac(mu, f);
    }
    return sum;
}

double tail_moment(const Measure& mu, double q, double t) {
    if (!(q > 0.0) || !(t > 0.0)) throw std::invalid_argument("tail_moment: q > 0, t > 0");
    double sum = 0.0;
    for (const auto& a : mu.atoms)
        if (std::abs(a.location) > t) sum += a.weight * std::pow(std::abs(a.location), q);
    if (!mu.has_ac()) return sum;
    auto f = [q](double x) { return std::pow(std::abs(x), q); };
    auto piece = [&](double a, double b) {
        if (!(a < b)) return 0.0;
        if (mu.density_fn) {
            return tanh_sinh([&](double x, double, double) { return mu.density_fn(x) * f(x); },
                             a, b);
        }
        // clip the grid rule by zeroing f outside the tail
        return integrate_grid(mu.lo, mu.hi, mu.density, [&](double x) {
            return (x >= a && x <= b) ? f(x) : 0.0;
        });
    };
    if (mu.density_fn) {
        sum += piece(mu.lo, std::min(-t, mu.hi));
        sum += piece(std::max(t, mu.lo), mu.hi);
    } else {
        sum += piece(mu.lo, -t) + piece(t, mu.hi);
    }
    return sum;
}

double lyapunov_fraction(const Measure& mu, double q, int n) {
    if (q < 2.0 || n < 1) throw std::invalid_argument("lyapunov_fraction: q >= 2, n >= 1");
    return abs_moment(mu, q) / std::pow(static_cast<double>(n), (q - 2.0) / 2.0);
}

double eta_qs(const Measure& mu, double q, int s, int n) {
    if (s < 1 || s > 3) throw std::invalid_argument("eta_qs: s in {1,2,3}");
    if (q < s + 1.0) throw std::invalid_argument("eta_qs: q >= s+1 required");
    const double qs = std::min(q, static_cast<double>(s + 2));
    const double beta = abs_moment(mu, qs);
    const double sqn = std::sqrt(static_cast<double>(n));
    const double eps_hi = std::pow(10.0, -0.5);
    const double eps_lo = 1e-4;
    const int npts = 200;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < npts; ++i) {
        double eps = eps_lo * std::pow(eps_hi / eps_lo, i / (npts - 1.0));
        double g = std::pow(eps, s + 2.0 - qs) +
                   tail_moment(mu, qs, eps * sqn) / beta * std::pow(eps, -qs);
        best = std::min(best, g);
    }
    return best;
}

namespace {

// truncated power series helpers on vectors (c[i] is the t^i coefficient)
std::vector<double> ps_mul(const std::vector<double>& a, const std::vector<double>& b, size_t m) {
    std::vector<double> r(m, 0.0);
    for (size_t i = 0; i < a.size() && i < m; ++i)
        for (size_t j = 0; j < b.size() && i + j < m; ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<double> ps_recip(const std::vector<double>& a, size_t m) {
    // requires a[0] == 1
    std::vector<double> r(m, 0.0);
    r[0] = 1.0;
    for (size_t k = 1; k < m; ++k) {
        double acc = 0.0;
        for (size_t j = 1; j <= k && j < a.size(); ++j) acc += a[j] * r[k - j];
        r[k] = -acc;
    }
    return r;
}

}  // namespace

std::vector<double> cumulants_from_moments(const std::vector<double>& ms) {
    const size_t K = ms.size();
    if (K < 1) throw std::invalid_argument("cumulants_from_moments: need K >= 1 moments");
    const size_t M = K + 1;  // truncation length in t = 1/z

    // F(z) = z * recip(moment series);   F = z + sum_j f[j] t^j
    std::vector<double> mser(M + 1, 0.0);
    mser[0] = 1.0;
    for (size_t j = 1; j <= K; ++j) mser[j] = ms[j - 1];
    std::vector<double> R = ps_recip(mser, M + 1);
    std::vector<double> f(M, 0.0);  // f[j] = coefficient of z^{-j} in F - z
    for (size_t j = 0; j < M; ++j) f[j] = R[j + 1];

    // revert: W(z) = z + sum c[j] t^j with F(W(z)) = z, via the fixed point
    // c = -(f0 + f1 s + f2 s^2 + ...) where s = 1/W
    std::vector<double> c(M, 0.0);
    for (size_t pass = 0; pass <= M; ++pass) {
        // s = 1/W = t * recip(1 + sum c[j] t^{j+1})
        std::vector<double> den(M + 1, 0.0);
        den[0] = 1.0;
        for (size_t j = 0; j + 1 <= M && j < c.size(); ++j) den[j + 1] = c[j];
        std::vector<double> sr = ps_recip(den, M + 1);  // s = t * sr
        // accumulate -(f0 + f1 s + ...) by Horner in s
        std::vector<double> acc(M + 1, 0.0);
        for (size_t j = M; j-- > 0;) {
            // acc = acc * s + f[j];  s = t * sr
            std::vector<double> shifted(M + 1, 0.0);
            for (size_t i = 0; i + 1 <= M; ++i) shifted[i + 1] = acc[i];
            acc = ps_mul(shifted, sr, M + 1);
            acc[0] += f[j];
        }
        for (size_t j = 0; j < M; ++j) c[j] = -acc[j];
    }
    // phi = W - z;  alpha_k = coefficient of z^{-(k-1)}
    std::vector<double> alpha(K);
    for (size_t k = 1; k <= K; ++k) alpha[k - 1] = c[k - 1];
    return alpha;
}

MomentSummary moment_summary(const Measure& mu, int K, const std::vector<double>& qs) {
    MomentSummary s;
    s.moments.resize(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) s.moments[static_cast<size_t>(k)] = moment(mu, k);
    std::vector<double> ms(s.moments.begin() + 1, s.moments.end());
    s.cumulants = cumulants_from_moments(ms);
    for (double q : qs) s.abs_moments[q] = abs_moment(mu, q);
    return s;
}

Measure affine_pushforward(const Measure& mu, double s, double t) {
    if (s == 0.0) throw std::invalid_argument("affine_pushforward: scale must be nonzero");
    Measure out;
    out.label = mu.label;
    out.atoms.reserve(mu.atoms.size());
    for (const auto& a : mu.atoms) out.atoms.push_back({s * a.location + t, a.weight});
    if (s < 0.0) std::reverse(out.atoms.begin(), out.atoms.end());
    if (mu.has_ac()) {
        const double as = std::abs(s);
        if (s > 0.0) {
            out.lo = s * mu.lo + t;
            out.hi = s * mu.hi + t;
        } else {
            out.lo = s * mu.hi + t;
            out.hi = s * mu.lo + t;
        }
        out.density.resize(mu.density.size());
        for (size_t i = 0; i < mu.density.size(); ++i) {
            size_t j = (s > 0.0) ? i : mu.density.size() - 1 - i;
            out.density[i] = mu.density[j] / as;
        }
        if (mu.density_fn) {
            auto fn = mu.density_fn;
            out.density_fn = [fn, s, t, as](double x) { return fn((x - t) / s) / as; };
        }
    }
    if (mu.cauchy_fn) {
        auto gf = mu.cauchy_fn;
        if (s > 0.0) {
            out.cauchy_fn = [gf, s, t](Complex z) { return gf((z - t) / s) / s; };
        } else {
            out.cauchy_fn = [gf, s, t](Complex z) {
                return std::conj(gf(std::conj((z - t) / s))) / s;
            };
        }
    }
    return out;
}

Measure scale(const Measure& mu, double c) {
    if (c == 0.0) throw std::invalid_argument("scale: c must be nonzero");
    return affine_pushforward(mu, c, 0.0);
}

Measure standardize(const Measure& mu) {
    double m1 = moment(mu, 1);
    double var = moment(mu, 2) - m1 * m1;
    if (!(var > 1e-14))
        throw DegenerateMeasureError("standardize: zero variance (Dirac-type measure)");
    double sd = std::sqrt(var);
    return affine_pushforward(mu, 1.0 / sd, -m1 / sd);
}

Measure bernoulli() {
    Measure mu;
    mu.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    mu.label = "bernoulli";
    return mu;
}

Measure tilted_bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("tilted_bernoulli: p in (0,1)");
    Measure mu;
    double a = -std::sqrt((1.0 - p) / p);
    double b = std::sqrt(p / (1.0 - p));
    mu.atoms = {{a, p}, {b, 1.0 - p}};
    mu.label = "tilted_bernoulli";
    return mu;
}

Measure semicircle(int grid_n) {
    Measure mu;
    mu.lo = -2.0;
    mu.hi = 2.0;
    mu.density_fn = [](double x) {
        double d = 4.0 - x * x;
        return d > 0.0 ? std::sqrt(d) / (2.0 * kPi) : 0.0;
    };
    mu.density = sample_density(mu.lo, mu.hi, grid_n, mu.density_fn);
    mu.cauchy_fn = [](Complex z) { return 0.5 * (z - sqrt_upper(z, 2.0)); };
    mu.label = "semicircle";
    return mu;
}

Measure arcsine(int grid_n) {
    Measure mu;
    mu.lo = -2.0;
    mu.hi = 2.0;
    mu.density_fn = [](double x) {
        double d = 4.0 - x * x;
        return d > 0.0 ? 1.0 / (kPi * std::sqrt(d)) : 0.0;
    };
    mu.density = sample_density(mu.lo, mu.hi, grid_n, mu.density_fn);
    mu.cauchy_fn = [](Complex z) { return 1.0 / sqrt_upper(z, 2.0); };
    mu.label = "arcsine";
    return mu;
}

Measure measure_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Measure mu;
    if (j.contains("atoms"))
        for (const auto& a : j["atoms"])
            mu.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    if (j.contains("support")) {
        mu.lo = j["support"].at(0).get<double>();
        mu.hi = j["support"].at(1).get<double>();
    }
    if (j.contains("density_grid")) mu.density = j["density_grid"].get<std::vector<double>>();
    if (j.contains("label")) mu.label = j["label"].get<std::string>();
    validate(mu);
    return mu;
}

std::string measure_to_json_text(const Measure& mu) {
    nlohmann::json j;
    auto atoms = nlohmann::json::array();
    for (const auto& a : mu.atoms) atoms.push_back({a.location, a.weight});
    j["atoms"] = atoms;
    if (mu.has_ac()) {
        j["support"] = {mu.lo, mu.hi};
        // renormalize the stored samples so the grid rule reproduces the ac
        // mass exactly; closed-form evaluators do not survive serialization
        double atom_mass = 0.0;
        for (const auto& a : mu.atoms) atom_mass += a.weight;
        double grid_mass =
            integrate_grid(mu.lo, mu.hi, mu.density, [](double) { return 1.0; });
        std::vector<double> values = mu.density;
        if (grid_mass > 0.0) {
            double c = (1.0 - atom_mass) / grid_mass;
            for (auto& v : values) v *= c;
        }
        j["density_grid"] = values;
    }
    if (!mu.label.empty()) j["label"] = mu.label;
    return j.dump();
}

Measure parse_measure_spec(const std::string& spec) {
    if (spec == "bernoulli") return bernoulli();
    if (spec == "semicircle") return semicircle();
    if (spec == "arcsine") return arcsine();
    if (spec.rfind("tilted_bernoulli", 0) == 0) {
        auto l = spec.find('('), r = spec.find(')');
        if (l == std::string::npos || r == std::string::npos || r < l)
            throw std::invalid_argument("parse_measure_spec: expected tilted_bernoulli(p)");
        return tilted_bernoulli(std::stod(spec.substr(l + 1, r - l - 1)));
    }
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("parse_measure_spec: unknown preset or file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return measure_from_json_text(ss.str());
}

}  // namespace freeclt
