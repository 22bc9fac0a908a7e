#include "freeclt/transform.hpp"

#include <algorithm>
#include <cmath>

namespace freeclt {

namespace {

// Quadrature against the closed-form density: 256-node Gauss-Legendre over
// the middle of the support, with the outermost 2% handled through the
// x = edge +- s^2 substitution so square-root edge behavior costs nothing.
Complex ac_integral(const Measure& mu, const std::function<Complex(double)>& f) {
    const double len = mu.hi - mu.lo;
    const double cut = 0.02 * len;
    const double sl = std::sqrt(cut);
    Complex sum = integrate_gl_complex(f, mu.lo + cut, mu.hi - cut, 256);
    sum += integrate_gl_complex([&](double s) { return 2.0 * s * f(mu.lo + s * s); }, 0.0, sl,
                                64);
    sum += integrate_gl_complex([&](double s) { return 2.0 * s * f(mu.hi - s * s); }, 0.0, sl,
                                64);
    return sum;
}

// Exact integral of the piecewise-linear grid density against 1/(z-x);
// remains accurate for z arbitrarily close to the support.
Complex panel_cauchy(const Measure& mu, Complex z) {
    const int n = static_cast<int>(mu.density.size());
    const double h = mu.step();
    std::vector<Complex> logs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) logs[static_cast<size_t>(i)] = std::log(z - (mu.lo + i * h));
    Complex sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        double x0 = mu.lo + i * h;
        double p0 = mu.density[static_cast<size_t>(i)];
        double p1 = mu.density[static_cast<size_t>(i + 1)];
        double beta = (p1 - p0) / h;
        double alpha = p0 - beta * x0;
        sum += -beta * h +
               (alpha + beta * z) * (logs[static_cast<size_t>(i)] - logs[static_cast<size_t>(i + 1)]);
    }
    return sum;
}

bool near_support(const Measure& mu, Complex z) {
    double r = 0.5 * (mu.hi - mu.lo);
    double dx = 0.0;
    if (z.real() < mu.lo) dx = mu.lo - z.real();
    if (z.real() > mu.hi) dx = z.real() - mu.hi;
    return std::hypot(dx, z.imag()) < 0.05 * r;
}

Complex atom_cauchy(const Measure& mu, Complex z) {
    Complex sum = 0.0;
    for (const auto& a : mu.atoms) sum += a.weight / (z - a.location);
    return sum;
}

// G restricted to the ac part.
Complex ac_cauchy(const Measure& mu, Complex z) {
    if (!mu.has_ac()) return 0.0;
    if (!mu.density_fn) return panel_cauchy(mu, z);
    if (!near_support(mu, z)) {
        return ac_integral(mu, [&](double x) { return mu.density_fn(x) / (z - x); });
    }
    // z hugging the support: integrate the difference quotient against the
    // density value at the nearest real point, and fold that constant back
    // in through the exact log term
    double x0 = std::clamp(z.real(), mu.lo, mu.hi);
    double p0 = mu.density_fn(x0);
    Complex smooth =
        ac_integral(mu, [&](double x) { return (mu.density_fn(x) - p0) / (z - x); });
    return smooth + p0 * (std::log(z - mu.lo) - std::log(z - mu.hi));
}

}  // namespace

Complex cauchy_transform_quadrature(const Measure& mu, Complex z) {
    if (!(z.imag() > 0.0)) throw std::domain_error("cauchy_transform: Im z > 0 required");
    return atom_cauchy(mu, z) + ac_cauchy(mu, z);
}

Complex cauchy_transform(const Measure& mu, Complex z) {
    if (!(z.imag() > 0.0)) throw std::domain_error("cauchy_transform: Im z > 0 required");
    if (mu.cauchy_fn) return mu.cauchy_fn(z);
    return atom_cauchy(mu, z) + ac_cauchy(mu, z);
}

Complex cauchy_transform_xkernel(const Measure& mu, Complex z) {
    if (mu.cauchy_fn) return z * mu.cauchy_fn(z) - 1.0;
    Complex sum = 0.0;
    double atom_mass = 0.0;
    for (const auto& a : mu.atoms) {
        sum += a.weight * a.location / (z - a.location);
        atom_mass += a.weight;
    }
    if (!mu.has_ac()) return sum;
    if (mu.density_fn)
        return sum + ac_integral(mu, [&](double x) { return x * mu.density_fn(x) / (z - x); });
    double ac_mass = integrate_grid(mu.lo, mu.hi, mu.density, [](double) { return 1.0; });
    return sum + z * panel_cauchy(mu, z) - ac_mass;
}

ComplexEvaluator cauchy_evaluator(const Measure& mu) {
    Measure copy = mu;
    return {[copy](Complex z) { return cauchy_transform(copy, z); },
            "cauchy:" + (mu.label.empty() ? std::string("measure") : mu.label)};
}

Complex reciprocal_transform(const Measure& mu, Complex z) {
    return 1.0 / cauchy_transform(mu, z);
}

double invert_density(const ComplexEvaluator& G, double x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("invert_density: eps > 0 required");
    return -G(Complex(x, eps)).imag() / kPi;
}

namespace {

// cumulative masses per cell, consistent with integrate_grid's edge handling
std::vector<double> cell_masses(double lo, double hi, const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> cm(static_cast<size_t>(std::max(n - 1, 0)), 0.0);
    if (n < 2) return cm;
    const double h = (hi - lo) / (n - 1);
    int zone = std::max(2, static_cast<int>(0.02 * (n - 1)));
    zone = std::min(zone, (n - 1) / 2);
    for (int i = 0; i + 1 < n; ++i) {
        double pa = v[static_cast<size_t>(i)], pb = v[static_cast<size_t>(i + 1)];
        double mass = 0.5 * h * (pa + pb);
        if (i < zone || i >= n - 1 - zone) {
            bool left = i < zone;
            double t1 = left ? (i + 1) * h : (n - 1 - i) * h;  // far end, from the edge
            double t0 = t1 - h;
            double pfar = left ? pb : pa;
            double pnear = left ? pa : pb;
            double gamma = 0.0;
            bool ok = false;
            if (t0 <= 0.0) {
                double q1 = left ? v[1] : v[static_cast<size_t>(n - 2)];
                double q2 = (n >= 3) ? (left ? v[2] : v[static_cast<size_t>(n - 3)]) : q1;
                if (q1 > 0.0 && q2 > 0.0) {
                    gamma = std::log(q2 / q1) / std::log(2.0);
                    ok = true;
                }
            } else if (pfar > 0.0 && pnear > 0.0) {
                gamma = std::log(pfar / pnear) / std::log(t1 / t0);
                ok = true;
            }
            if (ok && std::isfinite(gamma) && gamma > -0.95 && gamma < 4.0 && pfar > 0.0) {
                double A = pfar / std::pow(t1, gamma);
                double m1 = std::pow(t1, gamma + 1.0);
                double m0 = t0 > 0.0 ? std::pow(t0, gamma + 1.0) : 0.0;
                mass = A * (m1 - m0) / (gamma + 1.0);
            }
        }
        cm[static_cast<size_t>(i)] = mass;
    }
    return cm;
}

Cdf make_cdf(double lo, double hi, std::vector<double> values, std::vector<Atom> atoms) {
    const int n = static_cast<int>(values.size());
    std::vector<double> cum(1, 0.0);
    if (n >= 2) {
        auto cm = cell_masses(lo, hi, values);
        cum.resize(cm.size() + 1, 0.0);
        for (size_t i = 0; i < cm.size(); ++i) cum[i + 1] = cum[i] + cm[i];
    }
    const double h = (n >= 2) ? (hi - lo) / (n - 1) : 0.0;
    return [lo, hi, h, n, values = std::move(values), cum = std::move(cum),
            atoms = std::move(atoms)](double x) {
        double s = 0.0;
        for (const auto& a : atoms)
            if (a.location < x) s += a.weight;
        if (n < 2) return s;
        if (x <= lo) return s;
        if (x >= hi) return s + cum.back();
        double u = (x - lo) / h;
        int i = std::min(static_cast<int>(u), n - 2);
        double frac = u - i;
        double pa = values[static_cast<size_t>(i)], pb = values[static_cast<size_t>(i + 1)];
        double part = h * frac * (pa + 0.5 * frac * (pb - pa));
        return s + cum[static_cast<size_t>(i)] + part;
    };
}

}  // namespace

Cdf cdf_from_density(const Measure& mu) { return make_cdf(mu.lo, mu.hi, mu.density, mu.atoms); }

Cdf cdf_from_density(const SignedDensity& d) { return make_cdf(d.lo, d.hi, d.values, d.atoms); }

double kolmogorov_distance(const Cdf& f1, const Cdf& f2, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("kolmogorov_distance: empty grid");
    double best = 0.0;
    for (double x : grid) best = std::max(best, std::abs(f1(x) - f2(x)));
    return best;
}

std::vector<double> kolmogorov_grid(double lo, double hi, int n,
                                    std::span<const double> atom_locations) {
    std::vector<double> g;
    g.reserve(static_cast<size_t>(n) + 2 * atom_locations.size());
    const double a = lo - 1.0, b = hi + 1.0;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1.0));
    for (double x : atom_locations) {
        g.push_back(x - 1e-12);
        g.push_back(x + 1e-12);
    }
    std::sort(g.begin(), g.end());
    return g;
}

Complex voiculescu_transform(const std::function<Complex(Complex)>& F, Complex z, double tol) {
    Complex w = z;
    for (int it = 0; it < 100; ++it) {
        Complex r = F(w) - z;
        if (std::abs(r) <= tol) return w - z;
        double hstep = 1e-7 * std::max(1.0, std::abs(w));
        Complex dF = (F(w + hstep) - F(w - hstep)) / (2.0 * hstep);
        Complex step = r / dF;
        int halvings = 0;
        while ((w - step).imag() <= 0.0 && halvings < 60) {
            step *= 0.5;
            ++halvings;
        }
        if (halvings >= 60)
            throw NoConvergenceError("voiculescu_transform: cannot keep iterate in C+");
        w -= step;
    }
    throw NoConvergenceError("voiculescu_transform: Newton did not reach tolerance");
}

Complex voiculescu_transform(const Measure& mu, Complex z, double tol) {
    Measure copy = mu;
    return voiculescu_transform([copy](Complex w) { return reciprocal_transform(copy, w); }, z,
                                tol);
}

}  // namespace freeclt
