#include "freeclt/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace freeclt {

namespace {

// Newton iteration on P_n, nodes seeded by the Chebyshev approximation.
QuadratureRule make_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    return h * sum;
}

Complex integrate_gl_complex(const std::function<Complex(double)>& f, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    return h * sum;
}

double integrate_trig(const std::function<double(double)>& f, double lo, double hi, int n) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    const auto& rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double theta = 0.5 * kPi * rule.nodes[i];
        sum += rule.weights[i] * std::cos(theta) * f(c + r * std::sin(theta));
    }
    return 0.5 * kPi * r * sum;
}

Complex integrate_trig_complex(const std::function<Complex(double)>& f, double lo, double hi,
                               int n) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    const auto& rule = gauss_legendre(n);
    Complex sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double theta = 0.5 * kPi * rule.nodes[i];
        sum += rule.weights[i] * std::cos(theta) * f(c + r * std::sin(theta));
    }
    return 0.5 * kPi * r * sum;
}

namespace {

struct DeNode {
    double u;   // position in (0,1), measured from the left endpoint
    double w;   // weight in the unit interval
};

// Abscissa/weight for tanh-sinh at parameter t: x = tanh((pi/2) sinh t).
// Returns position as distance from the nearer endpoint to preserve
// precision deep in the corners.
DeNode de_node(double t) {
    double s = 0.5 * kPi * std::sinh(t);
    double ch = std::cosh(s);
    DeNode nd;
    nd.u = 0.5 * std::exp(-s) / ch;                    // (1 - tanh s)/2, stable for s >> 1
    nd.w = 0.25 * kPi * std::cosh(t) / (ch * ch);
    return nd;
}

}  // namespace

double tanh_sinh(const std::function<double(double, double, double)>& f, double a, double b,
                 double target_eps, int max_level) {
    const double len = b - a;
    const double t_max = 4.0;
    double h = 1.0;

    auto eval_at = [&](double t) -> double {
        DeNode nd = de_node(std::abs(t));
        double da, db;
        if (t >= 0.0) {  // node near b
            db = len * nd.u;
            da = len - db;
        } else {  // node near a
            da = len * nd.u;
            db = len - da;
        }
        if (da <= 0.0 || db <= 0.0) return 0.0;
        double x = (t >= 0.0) ? b - db : a + da;
        double v = f(x, da, db) * nd.w;
        return std::isfinite(v) ? v : 0.0;
    };

    double sum = eval_at(0.0);
    for (double t = h; t <= t_max; t += h) sum += eval_at(t) + eval_at(-t);
    double integral = sum * h * len;

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= t_max; t += 2.0 * h) add += eval_at(t) + eval_at(-t);
        sum += add;
        double next = sum * h * len;
        double diff = std::abs(next - integral);
        integral = next;
        if (level >= 3 && diff <= target_eps * (1.0 + std::abs(integral))) break;
    }
    return integral;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double target_eps,
                 int max_level) {
    return tanh_sinh([&f](double x, double, double) { return f(x); }, a, b, target_eps,
                     max_level);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need >= 2 matching points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace freeclt
