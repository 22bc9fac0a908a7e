#include "freeclt/edgeworth.hpp"

#include <cmath>
#include <stdexcept>

namespace freeclt {

double chebyshev_u(int m, double x) {
    if (m < 0) throw std::invalid_argument("chebyshev_u: m >= 0");
    double u0 = 1.0, u1 = 2.0 * x;
    if (m == 0) return u0;
    if (m == 1) return u1;
    for (int k = 2; k <= m; ++k) {
        double u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

double semicircle_density(double x) {
    double d = 4.0 - x * x;
    return d > 0.0 ? std::sqrt(d) / (2.0 * kPi) : 0.0;
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(0.5 * x) / kPi;
}

double expansion1_cdf(double x, double a_n) {
    return semicircle_cdf(x) - (a_n / 3.0) * chebyshev_u(2, 0.5 * x) * semicircle_density(x);
}

double expansion2_shifted_cdf(double x, const CltParams& p) {
    double corr = -(0.5 * p.a_n * p.a_n) * chebyshev_u(1, 0.5 * x) +
                  (p.a_n / 3.0) * (3.0 - chebyshev_u(2, 0.5 * x)) -
                  ((p.b_n - p.a_n * p.a_n - 1.0 / p.n) / 4.0) * chebyshev_u(3, 0.5 * x);
    return semicircle_cdf(x) + corr * semicircle_density(x);
}

double expansion2_symmetric_cdf(double x, double m4, int n) {
    return semicircle_cdf(x) -
           ((m4 - 2.0) / (4.0 * n)) * chebyshev_u(3, 0.5 * x) * semicircle_density(x);
}

double density_expansion(double x, const CltParams& p) {
    double inv_n = 1.0 / p.n;
    double factor = 1.0 + 0.5 * p.d_n - p.a_n * p.a_n - inv_n - p.a_n * x -
                    (p.b_n - p.a_n * p.a_n - inv_n) * x * x;
    return factor * semicircle_density(p.e_n * x);
}

Complex b1_closed(Complex z, double alpha3) {
    Complex sq = sqrt_upper(z, 2.0);
    Complex g = 0.5 * (z - sq);
    return alpha3 * g * g * g / sq;
}

Complex b2_closed(Complex z, double alpha3, double alpha4) {
    Complex sq = sqrt_upper(z, 2.0);   // sqrt(z^2-4) = 1/G_w - G_w
    Complex g = 0.5 * (z - sq);
    Complex g2 = g * g, g4 = g2 * g2;
    return (alpha4 - alpha3 * alpha3) * g4 / sq +
           alpha3 * alpha3 * (g4 * g / (sq * sq) + g2 / (sq * sq * sq));
}

double q1_term(double x, double a_n) {
    double pw = semicircle_density(x);
    double pws = semicircle_density(x - a_n);
    return semicircle_cdf(x - a_n) - semicircle_cdf(x) + a_n * pw +
           (a_n / 3.0) * (3.0 - chebyshev_u(2, 0.5 * x)) * (pws - pw);
}

double q2_term(double x, const CltParams& p) {
    double pw = semicircle_density(x);
    double pws = semicircle_density(x - p.a_n);
    double poly = (p.a_n * p.a_n / 6.0) * chebyshev_u(1, 0.5 * x) -
                  ((p.b_n - p.a_n * p.a_n - 1.0 / p.n) / 4.0) * chebyshev_u(3, 0.5 * x);
    return poly * (pws - pw);
}

double q1_sup_norm(double a_n) {
    const double lo = -2.0 - std::abs(a_n) - 0.5;
    const double hi = 2.0 + std::abs(a_n) + 0.5;
    const int n = 10000;
    double best_x = lo, best = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double v = std::abs(q1_term(x, a_n));
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    // golden-section refinement on |Q_1| around the scan winner
    double h = (hi - lo) / n;
    double a = best_x - h, b = best_x + h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::abs(q1_term(c, a_n)), fd = std::abs(q1_term(d, a_n));
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = std::abs(q1_term(c, a_n));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = std::abs(q1_term(d, a_n));
        }
    }
    return std::max({best, fc, fd});
}

}  // namespace freeclt
