#include "freeclt/subordination.hpp"

#include <cmath>

namespace freeclt {

namespace {

constexpr int kPicardCap = 500;
constexpr int kTotalCap = 10000;

}  // namespace

SubordinationSolution::SubordinationSolution(Measure base, int n, double tol, bool memoize)
    : base_(std::move(base)), n_(n), tol_(tol), memoize_(memoize) {
    if (n_ < 2) throw std::invalid_argument("subordination: n >= 2 required");
    if (base_.atoms.size() == 1 && !base_.has_ac())
        throw DegenerateMeasureError("subordination: base measure is a Dirac mass");
}

Complex SubordinationSolution::F_base(Complex w) const {
    return 1.0 / cauchy_transform(base_, w);
}

double SubordinationSolution::effective_tol(Complex z) const {
    // the residual combines terms of size |z| and (n-1)|F - w| ~ n/|w|;
    // 32 ulps of that scale is the honest floor
    double scale = std::abs(z) + static_cast<double>(n_);
    return std::max(tol_, 32.0 * 2.22e-16 * scale);
}

Complex SubordinationSolution::solve(Complex z, Complex w0) const {
    if (!(z.imag() > 0.0)) throw std::domain_error("solve_Z: Im z > 0 required");
    const double nn = static_cast<double>(n_);
    const double tol_eff = effective_tol(z);

    // residual(w) = z - n w + (n-1) F(w), assembled cancellation-free
    auto residual = [&](Complex w) -> Complex {
        Complex g = cauchy_transform(base_, w);
        Complex xk = cauchy_transform_xkernel(base_, w);
        // F(w) - w = (1 - w G)/G = -xk/G
        return (z - w) + (nn - 1.0) * (-xk / g);
    };

    Complex w = w0;
    if (!(w.imag() > 0.0)) w = z;
    long picard = 0, newton = 0;
    Complex res = residual(w);
    while (std::abs(res) > tol_eff && picard < kPicardCap) {
        w += res / nn;  // T(w) - w = residual/n
        res = residual(w);
        ++picard;
    }
    if (std::abs(res) > tol_eff) {
        // damped Newton on H(w) = residual(w)
        while (std::abs(res) > tol_eff && picard + newton < kTotalCap) {
            double hstep = 1e-7 * std::max(1.0, std::abs(w));
            Complex dH = (residual(w + hstep) - residual(w - hstep)) / (2.0 * hstep);
            Complex step = -res / dH;
            int halvings = 0;
            while ((w + step).imag() <= 0.0 && halvings < 60) {
                step *= 0.5;
                ++halvings;
            }
            Complex w_try = w + step;
            Complex res_try = residual(w_try);
            // fall back towards Picard direction if Newton overshoots badly
            if (std::abs(res_try) > 2.0 * std::abs(res)) {
                w_try = w + res / nn;
                res_try = residual(w_try);
            }
            w = w_try;
            res = res_try;
            ++newton;
        }
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stats_.queries += 1;
        stats_.picard_steps += picard;
        stats_.newton_steps += newton;
        stats_.max_residual = std::max(stats_.max_residual, std::abs(res));
    }
    if (std::abs(res) > tol_eff)
        throw NoConvergenceError("solve_Z: iteration cap exceeded, |residual| = " +
                                 std::to_string(std::abs(res)));
    return w;
}

Complex SubordinationSolution::Z(Complex z) const {
    if (memoize_) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find({z.real(), z.imag()});
        if (it != memo_.end()) return it->second;
    }
    Complex w = solve(z, z);
    if (memoize_) {
        std::lock_guard<std::mutex> lock(mutex_);
        memo_.emplace(std::make_pair(z.real(), z.imag()), w);
    }
    return w;
}

Complex SubordinationSolution::Z_from(Complex z, Complex w0) const { return solve(z, w0); }

Complex SubordinationSolution::G(Complex z) const { return 1.0 / F_base(Z(z)); }

SubordinationStats SubordinationSolution::stats() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return stats_;
}

SubordinationSolution::BoundCheck SubordinationSolution::z_lower_bound_check() const {
    double m1 = moment(base_, 1);
    double m2 = moment(base_, 2);
    double bound = std::sqrt((n_ - 1.0) / 8.0);
    if (n_ < 1000 || std::abs(m1) > 1e-9 || std::abs(m2 - 1.0) > 1e-9 ||
        tail_moment(base_, 2.0, bound) > 0.1)
        return BoundCheck::inapplicable;
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [key, w] : memo_)
        if (std::abs(w) < bound) return BoundCheck::violated;
    return BoundCheck::holds;
}

Complex solve_Z(const Measure& mu, int n, Complex z, double tol) {
    SubordinationSolution sol(mu, n, tol, false);
    return sol.Z(z);
}

Complex convolution_power_G(const Measure& mu, int n, Complex z, double tol) {
    SubordinationSolution sol(mu, n, tol, false);
    return sol.G(z);
}

Measure clt_measure(const Measure& mu, int n, int grid_n, double eps, double tol) {
    if (grid_n < 3) throw std::invalid_argument("clt_measure: grid_n >= 3 required");
    const double sqn = std::sqrt(static_cast<double>(n));
    const double L = mu.support_radius();

    Measure out;
    out.label = (mu.label.empty() ? std::string("measure") : mu.label) + "_clt_n" +
                std::to_string(n);
    // atoms of mu^{n boxplus}: base atom (x, w) survives iff n w - (n-1) > 0,
    // located at sqrt(n) x after the 1/sqrt(n) dilation
    for (const auto& a : mu.atoms) {
        double w = n * a.weight - (n - 1.0);
        if (w > 0.0) out.atoms.push_back({sqn * a.location, w});
    }
    double atom_mass = 0.0;
    for (const auto& a : out.atoms) atom_mass += a.weight;

    out.lo = -2.0 - L / sqn;
    out.hi = 2.0 + L / sqn;
    const auto atoms = out.atoms;

    // ac density by inversion, with the known atom poles subtracted
    auto solp = std::make_shared<SubordinationSolution>(mu, n, tol, false);
    auto density_raw = [solp, sqn, atoms, eps](double x) {
        Complex z(x, eps);
        Complex g = sqn * solp->G(sqn * z);
        for (const auto& a : atoms) g -= a.weight / (z - a.location);
        double p = -g.imag() / kPi;
        return p > 0.0 ? p : 0.0;
    };

    // grid sweep, warm-starting each solve from the previous Z
    out.density.resize(static_cast<size_t>(grid_n));
    {
        SubordinationSolution sweep(mu, n, tol, false);
        const double h = (out.hi - out.lo) / (grid_n - 1);
        Complex w_prev;
        bool have_prev = false;
        for (int i = 0; i < grid_n; ++i) {
            double x = (i == grid_n - 1) ? out.hi : out.lo + i * h;
            Complex z = sqn * Complex(x, eps);
            Complex w = have_prev ? sweep.Z_from(z, w_prev) : sweep.Z_from(z, z);
            w_prev = w;
            have_prev = true;
            Complex g = sqn / sweep.F_base(w);
            for (const auto& a : atoms) g -= a.weight / (Complex(x, eps) - a.location);
            double p = -g.imag() / kPi;
            out.density[static_cast<size_t>(i)] = p > 0.0 ? p : 0.0;
        }
    }

    double ac_mass = integrate_grid(out.lo, out.hi, out.density, [](double) { return 1.0; });
    double defect = std::abs(1.0 - atom_mass - ac_mass);
    if (defect > 1e-4)
        throw AccuracyError("clt_measure: mass defect " + std::to_string(defect) +
                            "; increase grid_n");
    double renorm = (1.0 - atom_mass) / ac_mass;
    if (renorm > 1.0 + 1e-6)
        throw AccuracyError("clt_measure: renormalization factor " + std::to_string(renorm) +
                            " exceeds 1 + 1e-6");
    for (auto& v : out.density) v *= renorm;
    out.density_fn = [density_raw, renorm](double x) { return renorm * density_raw(x); };
    return out;
}

}  // namespace freeclt
