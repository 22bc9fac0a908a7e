#include "freeclt/meixner.hpp"

#include <cmath>

namespace freeclt {

namespace {

constexpr double kAtomCutoff = 1e-14;  // (...)_+ clamp noise

double meixner_f(const MeixnerParams& p, double x) {
    return p.b * x * x + p.a * (1.0 - p.b) * x + 1.0 - p.d;
}

}  // namespace

void validate(const MeixnerParams& p) {
    if (!(p.b < 1.0) || !(p.d < 1.0))
        throw std::invalid_argument("meixner: parameters require b < 1 and d < 1");
}

CltParams clt_params(double m3, double m4, int n) {
    if (n < 1) throw std::invalid_argument("clt_params: n >= 1");
    double excess = m4 - 1.0 - m3 * m3;
    if (excess < -1e-12)
        throw std::invalid_argument("clt_params: moment inequality m4 - 1 - m3^2 >= 0 violated");
    if (excess < 0.0) excess = 0.0;
    CltParams p;
    p.n = n;
    p.a_n = m3 / std::sqrt(static_cast<double>(n));
    p.b_n = excess / n;
    p.d_n = (m4 - m3 * m3) / n;
    p.e_n = (1.0 - p.b_n) / std::sqrt(1.0 - p.d_n);
    if (n >= 3.0 * m4) {
        // bounds from the moment determinant argument
        if (!(p.b_n >= 0.0 && p.b_n <= 1.0 / 3.0 + 1e-12) ||
            !(p.d_n > 0.0 && p.d_n <= 1.0 / 3.0 + 1e-12) ||
            !(std::abs(p.a_n) <= 1.0 / std::sqrt(3.0) + 1e-12))
            throw std::invalid_argument("clt_params: parameter bounds violated for n >= 3 m4");
    }
    return p;
}

CltParams clt_params(const MomentSummary& ms, int n) {
    if (std::abs(ms.m(1)) > 1e-9 || std::abs(ms.m(2) - 1.0) > 1e-9)
        throw std::invalid_argument("clt_params: moments must be standardized (m1=0, m2=1)");
    return clt_params(ms.m(3), ms.m(4), n);
}

double meixner_support_radius(const MeixnerParams& p) {
    return 2.0 * std::sqrt(1.0 - p.d) / (1.0 - p.b);
}

double meixner_density(const MeixnerParams& p, double x) {
    double r = meixner_support_radius(p);
    double u = x - p.a;
    if (std::abs(u) >= r) return 0.0;
    double disc = 4.0 * (1.0 - p.d) - (1.0 - p.b) * (1.0 - p.b) * u * u;
    if (disc <= 0.0) return 0.0;
    double f = meixner_f(p, x);
    if (f == 0.0)
        throw std::invalid_argument("meixner_density: f(x) = 0 inside the support");
    return std::sqrt(disc) / (2.0 * kPi * f);
}

std::vector<Atom> meixner_atoms(const MeixnerParams& p) {
    validate(p);
    std::vector<Atom> atoms;
    if (p.b != 0.0) {
        double disc = p.a * p.a * (1.0 - p.b) * (1.0 - p.b) - 4.0 * p.b * (1.0 - p.d);
        if (disc > 0.0) {
            double sq = std::sqrt(disc);
            double y1 = (-p.a * (1.0 - p.b) - sq) / (2.0 * p.b);
            double y2 = (-p.a * (1.0 - p.b) + sq) / (2.0 * p.b);
            for (double y : {y1, y2}) {
                double lam = ((1.0 - p.d) / std::abs(y) - std::abs(y)) / sq;
                if (lam > kAtomCutoff) atoms.push_back({y, lam});
            }
        }
    } else if (p.a != 0.0) {
        double y = -(1.0 - p.d) / p.a;
        double lam = 1.0 - (1.0 - p.d) / (p.a * p.a);
        if (lam > kAtomCutoff) atoms.push_back({y, lam});
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& u, const Atom& v) { return u.location < v.location; });
    return atoms;
}

Complex meixner_reciprocal_transform(const MeixnerParams& p, Complex z) {
    Complex u = z - p.a;
    double r = meixner_support_radius(p);
    return p.a + 0.5 * ((1.0 + p.b) * u + (1.0 - p.b) * sqrt_upper(u, r));
}

Measure meixner_measure(const MeixnerParams& p, int grid_n) {
    validate(p);
    Measure mu;
    double r = meixner_support_radius(p);
    mu.lo = p.a - r;
    mu.hi = p.a + r;
    MeixnerParams pc = p;
    mu.density_fn = [pc](double x) { return meixner_density(pc, x); };
    mu.density.resize(static_cast<size_t>(grid_n));
    const double h = (mu.hi - mu.lo) / (grid_n - 1);
    for (int i = 0; i < grid_n; ++i) {
        double x = (i == grid_n - 1) ? mu.hi : mu.lo + i * h;
        mu.density[static_cast<size_t>(i)] = meixner_density(p, x);
    }
    mu.atoms = meixner_atoms(p);
    mu.cauchy_fn = [pc](Complex z) { return 1.0 / meixner_reciprocal_transform(pc, z); };
    mu.label = "meixner(" + std::to_string(p.a) + "," + std::to_string(p.b) + "," +
               std::to_string(p.d) + ")";
    return mu;
}

std::string meixner_family_label(const MeixnerParams& p) {
    if (p.a == 0.0 && p.b == 0.0 && p.d == 0.0) return "semicircle";
    if (p.b == 0.0 && p.d == 0.0 && p.a != 0.0) return "free-poisson";
    if (p.b == 0.0) return "shifted-free-poisson";
    if (p.b <= 0.0) return "meixner";  // outside the Saitoh-Yoshida positive-b cases
    double disc = p.a * p.a * (1.0 - p.b) * (1.0 - p.b) - 4.0 * p.b * (1.0 - p.d);
    if (disc > 0.0) return "free-pascal";
    if (disc == 0.0) return "free-gamma";
    return "pure-meixner";
}

namespace {

double semicircle_density_std(double x) {
    double d = 4.0 - x * x;
    return d > 0.0 ? std::sqrt(d) / (2.0 * kPi) : 0.0;
}

}  // namespace

double varsigma_density(const CltParams& p, double x) {
    double u = p.e_n * (x - p.a_n);
    return (u * u - 1.0) * semicircle_density_std(u);
}

double varsigma_cdf(const CltParams& p, double x) {
    double u = p.e_n * (x - p.a_n);
    if (u <= -2.0) return 0.0;
    if (u >= 2.0) return 0.0;  // total mass of the correction is zero
    // int_{-2}^{v} (u^2 - 1) p_w(u) du = -(sin 4t / 2 + sin 2t)/(2 pi), t = asin(v/2),
    // scaled by 1/e_n for the dilation
    double t = std::asin(0.5 * u);
    return -(0.5 * std::sin(4.0 * t) + std::sin(2.0 * t)) / (2.0 * kPi * p.e_n);
}

KappaMeasure kappa_measure(const CltParams& p, int grid_n) {
    MeixnerParams mp{p.a_n, p.b_n, p.d_n};
    validate(mp);
    KappaMeasure out;
    double r = meixner_support_radius(mp);
    out.density.lo = p.a_n - r;
    out.density.hi = p.a_n + r;
    out.density.atoms.clear();
    CltParams pc = p;
    double inv_n = 1.0 / p.n;
    out.density.density_fn = [mp, pc, inv_n](double x) {
        return meixner_density(mp, x) + inv_n * varsigma_density(pc, x);
    };
    out.density.values.resize(static_cast<size_t>(grid_n));
    const double h = (out.density.hi - out.density.lo) / (grid_n - 1);
    bool nonneg = true;
    for (int i = 0; i < grid_n; ++i) {
        double x = (i == grid_n - 1) ? out.density.hi : out.density.lo + i * h;
        double v = out.density.density_fn(x);
        out.density.values[static_cast<size_t>(i)] = v;
        if (v < -1e-12) nonneg = false;
    }
    // the Meixner part may carry atoms for exotic parameters; CLT parameters
    // never produce any, but keep them if present
    for (const auto& a : meixner_atoms(mp)) {
        out.density.atoms.push_back(a);
        if (a.weight < -1e-12) nonneg = false;
    }
    out.is_probability = nonneg;
    out.density.label = "kappa_n" + std::to_string(p.n);
    return out;
}

}  // namespace freeclt
