#include "freeclt/formal_series.hpp"

#include <sstream>
#include <stdexcept>

namespace freeclt {

CumulantPolynomial CumulantPolynomial::constant(const Rational& c) {
    CumulantPolynomial p;
    if (c != 0) p.terms[AlphaMonomial{}] = c;
    return p;
}

CumulantPolynomial CumulantPolynomial::alpha(int j) {
    if (j < 3 || j > 8)
        throw std::invalid_argument("CumulantPolynomial::alpha: generator set is alpha_3..alpha_8");
    AlphaMonomial m;
    m.e[static_cast<size_t>(j - 3)] = 1;
    CumulantPolynomial p;
    p.terms[m] = 1;
    return p;
}

bool CumulantPolynomial::is_one() const {
    return terms.size() == 1 && terms.begin()->first == AlphaMonomial{} &&
           terms.begin()->second == 1;
}

void CumulantPolynomial::prune() {
    for (auto it = terms.begin(); it != terms.end();)
        it = (it->second == 0) ? terms.erase(it) : std::next(it);
}

CumulantPolynomial& CumulantPolynomial::operator+=(const CumulantPolynomial& o) {
    for (const auto& [m, c] : o.terms) terms[m] += c;
    prune();
    return *this;
}

CumulantPolynomial& CumulantPolynomial::operator-=(const CumulantPolynomial& o) {
    for (const auto& [m, c] : o.terms) terms[m] -= c;
    prune();
    return *this;
}

CumulantPolynomial CumulantPolynomial::operator-() const {
    CumulantPolynomial r;
    for (const auto& [m, c] : terms) r.terms[m] = -c;
    return r;
}

CumulantPolynomial operator*(const CumulantPolynomial& a, const CumulantPolynomial& b) {
    CumulantPolynomial r;
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            AlphaMonomial m;
            for (size_t j = 0; j < 6; ++j) m.e[j] = ma.e[j] + mb.e[j];
            if (m.weight() > CumulantPolynomial::kWeightCap) continue;
            r.terms[m] += ca * cb;
        }
    }
    r.prune();
    return r;
}

Rational CumulantPolynomial::max_abs_coeff() const {
    Rational best = 0;
    for (const auto& [m, c] : terms) {
        Rational a = c < 0 ? Rational(-c) : c;
        if (a > best) best = a;
    }
    return best;
}

double CumulantPolynomial::eval(const std::array<double, 6>& alphas, double u) const {
    double sum = 0.0;
    for (const auto& [m, c] : terms) {
        double v = static_cast<double>(c);
        for (size_t j = 0; j < 6; ++j)
            for (int p = 0; p < m.e[j]; ++p) v *= alphas[j];
        sum += v * std::pow(u, m.weight());
    }
    return sum;
}

std::string CumulantPolynomial::to_string(bool with_u) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        for (size_t j = 0; j < 6; ++j) {
            if (m.e[j] == 0) continue;
            os << "*alpha" << (j + 3);
            if (m.e[j] > 1) os << "^" << m.e[j];
        }
        if (with_u && m.weight() > 0) {
            os << "*u";
            if (m.weight() > 1) os << "^" << m.weight();
        }
    }
    return os.str();
}

Complex FormalLaurentSeries::eval(const std::array<double, 6>& alphas, double u,
                                  Complex z) const {
    Complex inv = 1.0 / z;
    Complex acc = 0.0;
    for (int k = order(); k >= 0; --k)
        acc = acc * inv + coeff[static_cast<size_t>(k)].eval(alphas, u);
    return has_z ? acc + z : acc;
}

namespace {

using Poly = CumulantPolynomial;
using Series = std::vector<Poly>;  // s[i] is the t^i coefficient, t = 1/z

Series smul(const Series& a, const Series& b, size_t len) {
    Series r(len);
    for (size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size() && i + j < len; ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

Series srecip(const Series& a, size_t len) {
    if (a.empty() || !a[0].is_one())
        throw std::invalid_argument("series reciprocal: constant term must be 1");
    Series r(len);
    r[0] = Poly::constant(1);
    for (size_t k = 1; k < len; ++k) {
        Poly acc;
        for (size_t j = 1; j <= k && j < a.size(); ++j) acc += a[j] * r[k - j];
        r[k] = -acc;
    }
    return r;
}

// A(s) for a power series s with s[0] = 0, by Horner.
Series scompose(const Series& A, const Series& s, size_t len) {
    Series acc(len);
    for (size_t j = A.size(); j-- > 0;) {
        acc = smul(acc, s, len);
        acc[0] += A[j];
    }
    return acc;
}

// g-type series g = z + sum a_k z^{-k}  <->  P(t) = 1 + sum a_k t^{k+1}.
Series to_p(const FormalLaurentSeries& g, size_t len) {
    Series P(len);
    P[0] = Poly::constant(1);
    for (int k = 0; k <= g.order(); ++k)
        if (static_cast<size_t>(k + 1) < len) P[static_cast<size_t>(k + 1)] = g.at(k);
    return P;
}

FormalLaurentSeries from_p(const Series& P, int order) {
    FormalLaurentSeries g;
    g.has_z = true;
    g.coeff.resize(static_cast<size_t>(order) + 1);
    for (int k = 0; k <= order; ++k)
        if (static_cast<size_t>(k + 1) < P.size()) g.coeff[static_cast<size_t>(k)] = P[static_cast<size_t>(k + 1)];
    return g;
}

}  // namespace

FormalLaurentSeries phi_series(int K) {
    if (K < 2) throw std::invalid_argument("phi_series: K >= 2 required");
    FormalLaurentSeries f;
    f.has_z = false;
    f.coeff.resize(static_cast<size_t>(K) + 1);
    for (int k = 1; k <= K; ++k) {
        if (k == 1) {
            f.coeff[1] = Poly::constant(1);  // alpha_2 = 1
        } else if (k - 1 <= CumulantPolynomial::kWeightCap && k + 1 <= 8) {
            f.coeff[static_cast<size_t>(k)] = Poly::alpha(k + 1);
        }  // alpha_{k+1} with k+1 > 8 carries u-weight > 6: truncated away
    }
    return f;
}

FormalLaurentSeries solve_g(int K) {
    if (K < 3) throw std::invalid_argument("solve_g: K >= 3 required");
    const size_t len = static_cast<size_t>(K) + 2;
    FormalLaurentSeries phi = phi_series(K);
    // multiply g + 1/g = z + phi through by t:  P + t^2 recip(P) = 1 + t*phi
    Series Q(len);
    Q[0] = Poly::constant(1);
    for (int k = 1; k <= phi.order(); ++k)
        if (static_cast<size_t>(k + 1) < len) Q[static_cast<size_t>(k + 1)] = phi.at(k);
    Series P = Q;
    // each pass extends agreement by two orders
    for (int pass = 0; pass <= K / 2 + 1; ++pass) {
        Series r = srecip(P, len);
        Series next = Q;
        for (size_t i = 2; i < len; ++i) next[i] -= r[i - 2];
        if (next == P) break;
        P = next;
    }
    return from_p(P, K);
}

FormalLaurentSeries revert_g(const FormalLaurentSeries& g, int K) {
    if (!g.has_z) throw std::invalid_argument("revert_g: expected a g-type series");
    const size_t len = static_cast<size_t>(K) + 2;
    Series A(len);  // tail of g as a plain series: A[k] = a_k
    for (int k = 0; k <= g.order() && static_cast<size_t>(k) < len; ++k) A[static_cast<size_t>(k)] = g.at(k);
    Series D(len);  // D(t) = sum k a_k t^{k+1}, so g'(h) = 1 - D(1/h)
    for (int k = 1; k <= g.order() && static_cast<size_t>(k + 1) < len; ++k) {
        D[static_cast<size_t>(k + 1)] = Poly::constant(k) * g.at(k);
    }

    Series Ph(len);
    Ph[0] = Poly::constant(1);  // h = z
    for (int it = 0; it < 2 * K + 4; ++it) {
        Series s = srecip(Ph, len);  // 1/h = t * recip(Ph); shift below
        Series sshift(len);
        for (size_t i = 0; i + 1 < len; ++i) sshift[i + 1] = s[i];
        // residual r = g(h) - z = (Ph - 1)/t + A(s)
        Series r = scompose(A, sshift, len);
        for (size_t i = 0; i + 1 < len; ++i) r[i] += Ph[i + 1];
        // derivative 1 - D(s)
        Series dp = scompose(D, sshift, len);
        Series denom(len);
        denom[0] = Poly::constant(1);
        for (size_t i = 0; i < len; ++i) denom[i] -= dp[i];
        Series corr = smul(r, srecip(denom, len), len);
        // h <- h - corr
        Series next = Ph;
        bool changed = false;
        for (size_t i = 0; i + 1 < len; ++i) {
            Poly upd = next[i + 1] - corr[i];
            if (!(upd == next[i + 1])) changed = true;
            next[i + 1] = upd;
        }
        Ph = next;
        if (!changed) break;
    }
    return from_p(Ph, K);
}

bool composition_is_identity(const FormalLaurentSeries& g, const FormalLaurentSeries& ginv,
                             int K) {
    const size_t len = static_cast<size_t>(K) + 2;
    Series A(len);
    for (int k = 0; k <= g.order() && static_cast<size_t>(k) < len; ++k) A[static_cast<size_t>(k)] = g.at(k);
    Series Ph = to_p(ginv, len);
    Series s = srecip(Ph, len);
    Series sshift(len);
    for (size_t i = 0; i + 1 < len; ++i) sshift[i + 1] = s[i];
    Series r = scompose(A, sshift, len);
    for (size_t i = 0; i + 1 < len; ++i) r[i] += Ph[i + 1];
    for (const auto& c : r)
        if (!c.is_zero()) return false;
    return true;
}

std::vector<FormalLaurentSeries> collect_Bk(const FormalLaurentSeries& ginv, int kmax, int M) {
    if (kmax < 1 || kmax > CumulantPolynomial::kWeightCap)
        throw std::invalid_argument("collect_Bk: kmax in [1, 6]");
    if (ginv.order() < M + 2 * kmax)
        throw std::invalid_argument("collect_Bk: ginv truncated below M + 2*kmax");
    const size_t len = static_cast<size_t>(ginv.order()) + 2;
    Series Ph = to_p(ginv, len);
    Series rec = srecip(Ph, len);  // 1/ginv = t * rec
    std::vector<FormalLaurentSeries> out;
    for (int k = 1; k <= kmax; ++k) {
        FormalLaurentSeries bk;
        bk.has_z = false;
        bk.coeff.resize(static_cast<size_t>(M) + 1);
        for (int j = 1; j <= M; ++j) {
            Poly filtered;
            const Poly& src = rec[static_cast<size_t>(j - 1)];
            for (const auto& [m, c] : src.terms)
                if (m.weight() == k) filtered.terms[m] = c;
            bk.coeff[static_cast<size_t>(j)] = filtered;
        }
        out.push_back(std::move(bk));
    }
    return out;
}

FormalLaurentSeries collect_B0(const FormalLaurentSeries& ginv, int M) {
    const size_t len = static_cast<size_t>(ginv.order()) + 2;
    Series Ph = to_p(ginv, len);
    Series rec = srecip(Ph, len);
    FormalLaurentSeries b0;
    b0.has_z = false;
    b0.coeff.resize(static_cast<size_t>(M) + 1);
    for (int j = 1; j <= M && static_cast<size_t>(j - 1) < rec.size(); ++j) {
        Poly filtered;
        for (const auto& [m, c] : rec[static_cast<size_t>(j - 1)].terms)
            if (m.weight() == 0) filtered.terms[m] = c;
        b0.coeff[static_cast<size_t>(j)] = filtered;
    }
    return b0;
}

namespace {

Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 1; i <= k; ++i) r *= Rational(n - k + i) / Rational(i);
    return r;
}

}  // namespace

FormalLaurentSeries b1_series_closed(int M) {
    // alpha3 z^{-3} / (z - 1/z) = alpha3 sum_{s>=0} z^{-4-2s}
    FormalLaurentSeries b;
    b.coeff.resize(static_cast<size_t>(M) + 1);
    Poly a3 = Poly::alpha(3);
    for (int j = 4; j <= M; j += 2) b.coeff[static_cast<size_t>(j)] = a3;
    return b;
}

FormalLaurentSeries b2_series_closed(int M) {
    FormalLaurentSeries b;
    b.coeff.resize(static_cast<size_t>(M) + 1);
    Poly a3 = Poly::alpha(3), a4 = Poly::alpha(4);
    Poly a3sq = a3 * a3;
    Poly lead = a4 - a3sq;
    // (alpha4 - alpha3^2) z^{-4} * z^{-1} (1 - z^{-2})^{-1}
    for (int s = 0; 5 + 2 * s <= M; ++s) b.coeff[static_cast<size_t>(5 + 2 * s)] += lead;
    // alpha3^2 z^{-5} * z^{-2} (1 - z^{-2})^{-2}
    for (int s = 0; 7 + 2 * s <= M; ++s)
        b.coeff[static_cast<size_t>(7 + 2 * s)] += Poly::constant(binom(s + 1, 1)) * a3sq;
    // alpha3^2 z^{-2} * z^{-3} (1 - z^{-2})^{-3}
    for (int s = 0; 5 + 2 * s <= M; ++s)
        b.coeff[static_cast<size_t>(5 + 2 * s)] += Poly::constant(binom(s + 2, 2)) * a3sq;
    return b;
}

ClosedFormReport verify_closed_forms(int M) {
    if (M < 10) throw std::invalid_argument("verify_closed_forms: M >= 10 required");
    ClosedFormReport rep;
    rep.order = M;
    const int kmax = 2;
    FormalLaurentSeries g = solve_g(M + 2 * kmax);
    FormalLaurentSeries ginv = revert_g(g, M + 2 * kmax);
    auto bks = collect_Bk(ginv, kmax, M);
    auto expected = std::vector<FormalLaurentSeries>{b1_series_closed(M), b2_series_closed(M)};
    std::array<Rational*, 2> diffs{&rep.b1_max_diff, &rep.b2_max_diff};
    for (int k = 0; k < 2; ++k) {
        for (int j = 0; j <= M; ++j) {
            Poly d = bks[static_cast<size_t>(k)].at(j) - expected[static_cast<size_t>(k)].at(j);
            Rational m = d.max_abs_coeff();
            if (m > *diffs[static_cast<size_t>(k)]) *diffs[static_cast<size_t>(k)] = m;
        }
    }
    rep.b1_exact = rep.b1_max_diff == 0;
    rep.b2_exact = rep.b2_max_diff == 0;
    rep.caveat =
        "B2 with alpha3 != 0 is not the Cauchy transform of a signed measure of "
        "locally bounded variation; only the shifted expansion applies in that case.";
    return rep;
}

std::string bk_table_csv(const FormalLaurentSeries& bk) {
    std::ostringstream os;
    os << "inv_z_power,monomial,coefficient\n";
    for (int j = 0; j <= bk.order(); ++j) {
        for (const auto& [m, c] : bk.at(j).terms) {
            os << j << ",";
            bool any = false;
            std::ostringstream mono;
            for (size_t i = 0; i < 6; ++i) {
                if (m.e[i] == 0) continue;
                if (any) mono << "*";
                mono << "alpha" << (i + 3);
                if (m.e[i] > 1) mono << "^" << m.e[i];
                any = true;
            }
            os << (any ? mono.str() : "1") << "," << c << "\n";
        }
    }
    return os.str();
}

}  // namespace freeclt
