#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

#include "freeclt/numerics.hpp"

namespace freeclt {

using Rational = boost::multiprecision::cpp_rational;

// Monomial in the free cumulants alpha_3..alpha_8.  The grading symbol
// u = n^{-1/2} never needs to be stored: alpha_{k+1} enters the expansion
// multiplied by u^{k-1}, so every monomial carries u to the power
// weight() = sum_j (j-2) e_j exactly.
struct AlphaMonomial {
    std::array<int, 6> e{};  // exponents of alpha_3 .. alpha_8

    int weight() const {
        int w = 0;
        for (int j = 0; j < 6; ++j) w += (j + 1) * e[static_cast<size_t>(j)];
        return w;
    }
    bool operator<(const AlphaMonomial& o) const { return e < o.e; }
    bool operator==(const AlphaMonomial& o) const { return e == o.e; }
};

// Exact-rational polynomial in alpha_3..alpha_8, truncated at u-weight 6
// (the generator set supports correction orders k <= 6).
class CumulantPolynomial {
public:
    static constexpr int kWeightCap = 6;

    std::map<AlphaMonomial, Rational> terms;

    static CumulantPolynomial constant(const Rational& c);
    static CumulantPolynomial alpha(int j);  // j in [3, 8]

    bool is_zero() const { return terms.empty(); }
    bool is_one() const;
    bool operator==(const CumulantPolynomial& o) const { return terms == o.terms; }

    CumulantPolynomial& operator+=(const CumulantPolynomial& o);
    CumulantPolynomial& operator-=(const CumulantPolynomial& o);
    CumulantPolynomial operator-() const;
    friend CumulantPolynomial operator+(CumulantPolynomial a, const CumulantPolynomial& b) {
        a += b;
        return a;
    }
    friend CumulantPolynomial operator-(CumulantPolynomial a, const CumulantPolynomial& b) {
        a -= b;
        return a;
    }
    friend CumulantPolynomial operator*(const CumulantPolynomial& a,
                                        const CumulantPolynomial& b);

    // Largest absolute value among the coefficients (0 for the zero polynomial).
    Rational max_abs_coeff() const;

    // Substitute numeric cumulants (alphas[j-3] is alpha_j) and u.
    double eval(const std::array<double, 6>& alphas, double u) const;

    // "alpha3^2*alpha4" style; with_u appends the implied power of u.
    std::string to_string(bool with_u = true) const;

private:
    void prune();
};

// Truncated series  [z] + c_0 + c_1/z + ... + c_M/z^M  with exact
// polynomial coefficients; has_z marks the leading z (coefficient 1).
struct FormalLaurentSeries {
    bool has_z = false;
    std::vector<CumulantPolynomial> coeff;  // coeff[k] multiplies z^{-k}

    int order() const { return static_cast<int>(coeff.size()) - 1; }
    const CumulantPolynomial& at(int k) const { return coeff.at(static_cast<size_t>(k)); }

    Complex eval(const std::array<double, 6>& alphas, double u, Complex z) const;
};

// sqrt(n) phi_mu(sqrt(n) z) as a formal series: coefficient of z^{-k} is
// alpha_{k+1} u^{k-1}, with alpha_1 = 0, alpha_2 = 1 imposed.
FormalLaurentSeries phi_series(int K);

// g = z + sum a_k z^{-k} solving g + 1/g = z + phi, order by order.
FormalLaurentSeries solve_g(int K);

// Compositional inverse g^{(-1)} = z + sum b_k z^{-k} (Newton doubling).
FormalLaurentSeries revert_g(const FormalLaurentSeries& g, int K);

// Exact check that g(ginv(z)) - z vanishes through order K.
bool composition_is_identity(const FormalLaurentSeries& g, const FormalLaurentSeries& ginv,
                             int K);

// Expand 1/ginv(z) and split by powers of u: element k-1 is the Laurent
// series of B_k(1/z) (u-free coefficients), k = 1..kmax, truncated at
// order M.  Requires ginv.order() >= M + 2*kmax.
std::vector<FormalLaurentSeries> collect_Bk(const FormalLaurentSeries& ginv, int kmax, int M);

// Weight-zero part of 1/ginv: the semicircle transform series
// z^{-1} + sum_m Catalan_m z^{-(2m+1)}.
FormalLaurentSeries collect_B0(const FormalLaurentSeries& ginv, int M);

// Laurent expansions of the closed rational forms
//   B_1(1/z) = alpha3 z^{-3}/(z - 1/z)
//   B_2(1/z) = (alpha4 - alpha3^2) z^{-4}/(z - 1/z)
//              + alpha3^2 (z^{-5}/(z - 1/z)^2 + z^{-2}/(z - 1/z)^3)
FormalLaurentSeries b1_series_closed(int M);
FormalLaurentSeries b2_series_closed(int M);

struct ClosedFormReport {
    int order = 0;
    bool b1_exact = false;
    bool b2_exact = false;
    Rational b1_max_diff = 0;
    Rational b2_max_diff = 0;
    std::string caveat;
};

// Engine-vs-closed-form comparison; differences must be exactly zero.
ClosedFormReport verify_closed_forms(int M);

// CSV table: power of 1/z, monomial, coefficient as "p/q".
std::string bk_table_csv(const FormalLaurentSeries& bk);

}  // namespace freeclt
