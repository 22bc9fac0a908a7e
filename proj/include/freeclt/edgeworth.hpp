#pragma once

#include "freeclt/meixner.hpp"
#include "freeclt/numerics.hpp"

namespace freeclt {

// Chebyshev polynomial of the second kind, U_{m+1} = 2x U_m - U_{m-1}.
double chebyshev_u(int m, double x);

// Standard semicircle density p_w and its exact distribution function
// w(x) = 1/2 + x sqrt(4-x^2)/(4 pi) + asin(x/2)/pi.
double semicircle_density(double x);
double semicircle_cdf(double x);

// Order-one approximant to F_n(x):  w(x) - (a_n/3) U_2(x/2) p_w(x).
double expansion1_cdf(double x, double a_n);

// Order-two approximant to F_n(x + a_n):
// w(x) + (-(a_n^2/2) U_1(x/2) + (a_n/3)(3 - U_2(x/2))
//         - ((b_n - a_n^2 - 1/n)/4) U_3(x/2)) p_w(x).
double expansion2_shifted_cdf(double x, const CltParams& p);

// Symmetric case (m3 = 0):  w(x) - ((m4-2)/(4n)) U_3(x/2) p_w(x).
double expansion2_symmetric_cdf(double x, double m4, int n);

// Density approximant v_n(x) to p_n(x + a_n):
// (1 + d_n/2 - a_n^2 - 1/n - a_n x - (b_n - a_n^2 - 1/n) x^2) p_w(e_n x).
double density_expansion(double x, const CltParams& p);

// Closed forms of the first two correction transforms evaluated on the
// semicircle Cauchy transform:
//   B_1(G_w(z)) = alpha3 G_w(z)^3 / sqrt(z^2-4)
//   B_2(G_w(z)) = (alpha4 - alpha3^2) G_w^4 / sqrt(z^2-4)
//                 + alpha3^2 (G_w^5/(z^2-4) + G_w^2/(z^2-4)^{3/2})
Complex b1_closed(Complex z, double alpha3);
Complex b2_closed(Complex z, double alpha3, double alpha4);

// Shift correction terms appearing in the unshifted order-two expansion.
double q1_term(double x, double a_n);
double q2_term(double x, const CltParams& p);

// sup_x |Q_1(x, a_n)|, located by a 10^4-point scan refined by golden
// section around the best bracket.
double q1_sup_norm(double a_n);

}  // namespace freeclt
