#include "doctest.h"

#include <cmath>
#include <random>

#include "freeclt/measure.hpp"

using namespace freeclt;

TEST_CASE("moments of two-point and semicircle measures") {
    Measure b = bernoulli();
    CHECK(moment(b, 0) == doctest::Approx(1.0));
    CHECK(moment(b, 2) == doctest::Approx(1.0));
    CHECK(moment(b, 3) == doctest::Approx(0.0));

    // Catalan number C_2 = 2, against an independent Simpson oracle
    Measure w = semicircle();
    auto pw = [](double x) { return std::sqrt(std::max(4.0 - x * x, 0.0)) / (2.0 * kPi); };
    double oracle = 0.0;
    const int N = 2'000'000;
    for (int i = 0; i < N; ++i) {
        double x0 = -2.0 + 4.0 * i / N, x1 = -2.0 + 4.0 * (i + 1) / N;
        double xm = 0.5 * (x0 + x1);
        auto f = [&](double x) { return std::pow(x, 4) * pw(x); };
        oracle += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1));
    }
    CHECK(oracle == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(moment(w, 4) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(moment(w, 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid-only path integrates semicircle-type edges") {
    Measure w = semicircle();
    Measure grid_only = w;
    grid_only.density_fn = nullptr;
    grid_only.cauchy_fn = nullptr;
    CHECK(total_mass(grid_only) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(moment(grid_only, 2) == doctest::Approx(1.0).epsilon(1e-6));

    Measure arc = arcsine();
    arc.density_fn = nullptr;
    arc.cauchy_fn = nullptr;
    CHECK(total_mass(arc) == doctest::Approx(1.0).epsilon(2e-8));
}

TEST_CASE("tail moments") {
    Measure b = bernoulli();
    CHECK(tail_moment(b, 2.0, 2.0) == doctest::Approx(0.0));
    CHECK(tail_moment(b, 2.0, 0.5) == doctest::Approx(1.0));
    CHECK(tail_moment(b, 3.0, 100.0) == doctest::Approx(0.0));
    // nonincreasing in t
    Measure w = semicircle();
    double prev = tail_moment(w, 2.0, 0.1);
    for (double t : {0.5, 1.0, 1.5, 1.9, 2.5}) {
        double cur = tail_moment(w, 2.0, t);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("lyapunov fractions") {
    Measure b = bernoulli();
    CHECK(lyapunov_fraction(b, 3.0, 4) == doctest::Approx(0.5));
    CHECK(lyapunov_fraction(b, 2.0, 17) == doctest::Approx(1.0));
    CHECK(lyapunov_fraction(b, 4.0, 10) == doctest::Approx(0.1));
    // strictly decreasing in n for q > 2
    CHECK(lyapunov_fraction(b, 3.0, 8) < lyapunov_fraction(b, 3.0, 4));
}

TEST_CASE("eta_qs diagnostics") {
    Measure b = bernoulli();
    // tail vanishes for eps >= 0.1, exponent s+2-q_s = 0: minimum 1
    CHECK(eta_qs(b, 3.0, 1, 100) == doctest::Approx(1.0));
    CHECK(eta_qs(b, 5.0, 3, 100) == doctest::Approx(1.0));
    // monotone decay when q_s < s+2
    double prev = 1e30;
    for (int n : {10, 40, 160, 640}) {
        double cur = eta_qs(b, 2.5, 1, n);
        CHECK(cur <= prev * (1.0 + 1e-12));
        prev = cur;
    }
    CHECK(eta_qs(b, 2.5, 1, 1 << 20) < 0.1);
}

TEST_CASE("free cumulants from moments") {
    // standardized measure: alpha3 = m3, alpha4 = m4 - 2
    auto al = cumulants_from_moments({0.0, 1.0, 0.7, 3.1});
    CHECK(al[0] == doctest::Approx(0.0));
    CHECK(al[1] == doctest::Approx(1.0));
    CHECK(al[2] == doctest::Approx(0.7));
    CHECK(al[3] == doctest::Approx(3.1 - 2.0));

    auto bern = cumulants_from_moments({0.0, 1.0, 0.0, 1.0});
    CHECK(bern[3] == doctest::Approx(-1.0));

    auto norm = cumulants_from_moments({0.0, 1.0});
    CHECK(norm[0] == doctest::Approx(0.0));
    CHECK(norm[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(cumulants_from_moments({}), std::invalid_argument);

    // non-centered: alpha_1 = m_1, alpha_2 = variance
    auto shifted = cumulants_from_moments({0.5, 1.25});
    CHECK(shifted[0] == doctest::Approx(0.5));
    CHECK(shifted[1] == doctest::Approx(1.0));
}

TEST_CASE("standardize and scale") {
    Measure b = bernoulli();
    Measure sb = standardize(b);
    CHECK(sb.atoms[0].location == doctest::Approx(-1.0));
    CHECK(sb.atoms[1].location == doctest::Approx(1.0));

    Measure tb = tilted_bernoulli(0.9);
    CHECK(tb.atoms[0].location == doctest::Approx(-1.0 / 3.0));
    CHECK(tb.atoms[1].location == doctest::Approx(3.0));
    CHECK(moment(tb, 1) == doctest::Approx(0.0));
    CHECK(moment(tb, 2) == doctest::Approx(1.0));
    CHECK(moment(tb, 3) == doctest::Approx(8.0 / 3.0));
    CHECK(moment(tb, 4) == doctest::Approx(73.0 / 9.0));

    Measure dirac;
    dirac.atoms = {{5.0, 1.0}};
    CHECK_THROWS_AS(standardize(dirac), DegenerateMeasureError);

    Measure s2 = scale(b, 2.0);
    CHECK(s2.atoms[0].location == doctest::Approx(-2.0));
    CHECK(moment(s2, 2) == doctest::Approx(4.0));
    CHECK_THROWS_AS(scale(b, 0.0), std::invalid_argument);

    // semicircle is symmetric: scale by -1 leaves moments unchanged
    Measure w = semicircle();
    Measure wm = scale(w, -1.0);
    for (int k : {1, 2, 3, 4})
        CHECK(moment(wm, k) == doctest::Approx(moment(w, k)).epsilon(1e-10));
}

TEST_CASE("moment scaling law holds to 1e-10 relative") {
    Measure w = semicircle();
    for (double c : {0.5, 1.7, -2.3}) {
        Measure sc = scale(w, c);
        for (int k : {1, 2, 3, 4, 5, 6}) {
            double lhs = moment(sc, k);
            double rhs = std::pow(c, k) * moment(w, k);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("mass conservation through transforms") {
    for (const Measure& mu :
         {bernoulli(), tilted_bernoulli(0.9), semicircle(), arcsine()}) {
        CHECK(total_mass(mu) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(total_mass(scale(mu, 1.7)) == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(total_mass(standardize(arcsine())) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("measure summary") {
    MomentSummary ms = moment_summary(bernoulli(), 4, {2.0, 3.0});
    CHECK(ms.m(0) == doctest::Approx(1.0));
    CHECK(ms.beta(2.0) == doctest::Approx(ms.m(2)));
    CHECK(ms.beta(3.0) >= std::abs(ms.m(3)));
    CHECK(ms.alpha(3) == doctest::Approx(ms.m(3)));
    CHECK(ms.alpha(4) == doctest::Approx(ms.m(4) - 2.0));
}

TEST_CASE("json round trip") {
    Measure w = semicircle(801);
    std::string text = measure_to_json_text(w);
    Measure back = measure_from_json_text(text);
    CHECK(back.lo == doctest::Approx(-2.0));
    CHECK(back.hi == doctest::Approx(2.0));
    CHECK(total_mass(back) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(moment(back, 2) == doctest::Approx(1.0).epsilon(1e-4));

    Measure b = parse_measure_spec("tilted_bernoulli(0.9)");
    CHECK(b.atoms.size() == 2);
    CHECK_THROWS(parse_measure_spec("no_such_preset"));
}

TEST_CASE("validation rejects malformed measures") {
    Measure bad;
    bad.atoms = {{0.0, -0.5}, {1.0, 1.5}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    Measure unordered;
    unordered.atoms = {{1.0, 0.5}, {0.0, 0.5}};
    CHECK_THROWS_AS(validate(unordered), std::invalid_argument);

    Measure leaky;
    leaky.atoms = {{0.0, 0.7}};
    CHECK_THROWS_AS(validate(leaky), AccuracyError);
}
