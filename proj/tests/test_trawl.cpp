#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mivt/bessel.hpp"
#include "mivt/errors.hpp"
#include "mivt/quadrature.hpp"
#include "mivt/trawl.hpp"

using namespace mivt;

namespace {

// reference values from a 30-digit mpmath evaluation
struct BesselRef {
    double nu, x, value;
};
const BesselRef kBesselRefs[] = {
    {0.5, 1.0, 0.46106850444789456},    {-0.5, 1.0, 0.46106850444789456},
    {1.0, 2.0, 0.13986588181652243},    {0.0, 1.0, 0.42102443824070833},
    {2.0, 0.5, 7.5501835512408694},     {2.5, 3.7, 0.032700514975185734},
    {-3.2, 0.5, 99.514276636232993},    {0.3, 10.0, 1.7856607016823022e-5},
    {5.0, 2.0, 9.4310491005964674},     {1.5, 0.1, 39.447835226769858},
    {0.0, 0.1, 2.4270690247020166},     {10.5, 40.0, 3.2508602587677696e-18},
    {-7.0, 0.25, 753011708.00520022},
};

std::vector<TrawlSpec> grid_of_specs() {
    return {
        Exponential(0.5),
        Exponential(2.157),
        SupIG(1.0, 1.0),
        SupIG(0.4, 2.0),
        GammaLongMemory(1.0, 2.0),
        GammaLongMemory(0.5, 1.3),
        GIG(0.7, 1.1, 0.9),
        GIG(-0.6, 2.0, 1.5),
        SeasonalExp(1.0, 1.0),
        SeasonalExp(2.0, 0.8),
    };
}

// independent route: adaptive quadrature of d on [cut, 0] plus the exact tail
double leb_by_quadrature(const TrawlSpec& spec) {
    const double cut = envelope_inverse(spec, 1e-12) - 1.0;
    QuadOptions opts;
    opts.rel_tol = 1e-11;
    std::vector<double> points{cut};
    for (double edge = -1.0; edge > cut; edge *= 2.0) points.push_back(edge);
    points.push_back(0.0);
    std::sort(points.begin(), points.end());
    const double body = integrate([&](double s) { return evaluate(spec, s); }, points, opts).value;
    return body + tail_mass(spec, cut);
}

}  // namespace

TEST_CASE("bessel_k matches reference values to 1e-10") {
    for (const BesselRef& ref : kBesselRefs) {
        CHECK(bessel_k(ref.nu, ref.x) == doctest::Approx(ref.value).epsilon(1e-10));
    }
    CHECK(bessel_k(0.5, 1.0) == doctest::Approx(std::sqrt(M_PI / 2.0) * std::exp(-1.0)));
}

TEST_CASE("bessel_k reflection and recurrence identities") {
    for (double nu : {0.1, 0.77, 1.5, 3.2, 9.9}) {
        for (double x : {0.2, 1.0, 4.0, 25.0}) {
            CHECK(bessel_k(-nu, x) == doctest::Approx(bessel_k(nu, x)).epsilon(1e-13));
            // K_{nu+1}(x) = K_{nu-1}(x) + (2 nu / x) K_nu(x)
            const double lhs = bessel_k(nu + 1.0, x);
            const double rhs = bessel_k(nu - 1.0, x) + 2.0 * nu / x * bessel_k(nu, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("bessel_k signals out-of-range arguments") {
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(1.0, -2.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(1.0, 800.0), numeric_error);
    CHECK_THROWS_AS(bessel_k(300.0, 1e-3), numeric_error);
}

TEST_CASE("log_bessel_k spans the underflow range") {
    CHECK(log_bessel_k(1.0, 700.0) == doctest::Approx(-703.04921348276688).epsilon(1e-12));
    CHECK(log_bessel_k(0.25, 800.0) == doctest::Approx(-803.11663162554128).epsilon(1e-12));
    CHECK(log_bessel_k(3.3, 2000.0) == doctest::Approx(-2003.5720005423828).epsilon(1e-12));
    CHECK(log_bessel_k(0.5, 1000.0) == doctest::Approx(-1003.2280862868463).epsilon(1e-12));
    CHECK(log_bessel_k(2.5, 3.7) ==
          doctest::Approx(std::log(0.032700514975185734)).epsilon(1e-12));
}

TEST_CASE("trawl function point values") {
    CHECK(evaluate(Exponential(2.0), 0.0) == 1.0);
    CHECK(evaluate(Exponential(2.0), -1.0) == doctest::Approx(std::exp(-2.0)));
    // d(z) = (1 - z/alpha)^{-H}: at alpha=1, H=2, z=-1 this is 1/4
    CHECK(evaluate(GammaLongMemory(1.0, 2.0), -1.0) == doctest::Approx(0.25));
    CHECK(evaluate(SupIG(1.0, 1.0), -1.5) ==
          doctest::Approx(0.18393972058572116).epsilon(1e-14));
    CHECK(evaluate(SeasonalExp(1.0, 1.0), 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(evaluate(Exponential(1.0), 0.5), std::domain_error);
}

TEST_CASE("trawl parameter validation happens at construction") {
    CHECK_THROWS_AS(Exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Exponential(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(GammaLongMemory(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GammaLongMemory(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(SupIG(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SupIG(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GIG(0.5, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GIG(0.5, 30.0, 30.0), std::invalid_argument);  // delta*gamma > 700
    CHECK_THROWS_AS(SeasonalExp(0.0, 1.0), std::invalid_argument);
    CHECK_NOTHROW(SupIG(0.0, 1.0));  // valid spec, infinite measure
}

TEST_CASE("lebesgue closed forms") {
    CHECK(lebesgue(Exponential(2.157)) == doctest::Approx(0.46360686138154845).epsilon(1e-14));
    CHECK(lebesgue(GammaLongMemory(1.0, 2.0)) == doctest::Approx(1.0));
    CHECK(lebesgue(SupIG(1.0, 1.0)) == doctest::Approx(1.0));
    CHECK(lebesgue(GIG(0.7, 1.1, 0.9)) == doctest::Approx(0.707469727262196).epsilon(1e-12));
    CHECK(lebesgue(SeasonalExp(1.0, 1.0)) == doctest::Approx(0.512352261515929).epsilon(1e-12));
    // psi -> 0 collapses the seasonal family to 1/lambda
    CHECK(lebesgue(SeasonalExp(1.0, 0.0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lebesgue(SupIG(0.0, 1.0)), error);
}

TEST_CASE("lebesgue agrees with quadrature of d across the family grid") {
    for (const TrawlSpec& spec : grid_of_specs()) {
        const double closed = lebesgue(spec);
        CHECK(leb_by_quadrature(spec) == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("trawl functions stay in [0,1] and monotone families are monotone") {
    for (const TrawlSpec& spec : grid_of_specs()) {
        double prev = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double z = std::min(-20.0 + 0.05 * k, 0.0);
            const double d = evaluate(spec, z);
            CHECK(d >= 0.0);
            CHECK(d <= 1.0 + 1e-15);
            if (is_monotone(spec)) {
                CHECK(d >= prev - 1e-12);
                prev = d;
            }
        }
        CHECK(evaluate(spec, 0.0) > 0.0);
    }
}

TEST_CASE("acf point values and basic shape") {
    CHECK(acf(Exponential(2.0), 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(acf(SupIG(1.0, 1.0), 1.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(acf(GammaLongMemory(1.0, 2.0), 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(acf(GIG(0.7, 1.1, 0.9), 1.5) == doctest::Approx(0.276762302233367).epsilon(1e-11));
    for (const TrawlSpec& spec : grid_of_specs()) {
        CHECK(acf(spec, 0.0) == 1.0);
        double prev = 2.0;
        for (double h : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double r = acf(spec, h);
            CHECK(std::abs(r) <= 1.0 + 1e-12);
            if (is_monotone(spec)) {
                CHECK(r <= prev + 1e-12);
                prev = r;
            }
        }
    }
    CHECK_THROWS_AS(acf(Exponential(1.0), -0.1), std::domain_error);
}

TEST_CASE("seasonal acf equals the exact trawl overlap") {
    // frozen 30-digit references for leb(A ∩ A_h)/leb(A)
    CHECK(acf(SeasonalExp(1.0, 1.0), 0.25) ==
          doctest::Approx(0.388850735790829159).epsilon(1e-9));
    CHECK(acf(SeasonalExp(1.0, 1.0), 0.5) ==
          doctest::Approx(0.266902837254940253).epsilon(1e-9));
    CHECK(acf(SeasonalExp(1.0, 1.0), 3.2) ==
          doctest::Approx(0.0328262982744960664).epsilon(1e-9));
    CHECK(acf(SeasonalExp(2.0, 0.8), 0.7) ==
          doctest::Approx(0.151256323645768004).epsilon(1e-9));
    CHECK(acf(SeasonalExp(0.7, 1.5), 0.33) ==
          doctest::Approx(0.318466266337971157).epsilon(1e-9));
    // at whole periods the overlap collapses to exp(-lambda h)
    CHECK(acf(SeasonalExp(1.0, 1.0), 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(acf(SeasonalExp(1.0, 1.0), 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("exponential-pair autocorrelator closed form") {
    CHECK(autocorrelator(Exponential(1.0), Exponential(2.0), 1.0) ==
          doctest::Approx(0.067667641618306346).epsilon(1e-14));
    CHECK(autocorrelator(Exponential(2.157), Exponential(1.919), 0.0) ==
          doctest::Approx(0.46360686138154845).epsilon(1e-14));
    // crossing case: larger rate first
    CHECK(autocorrelator(Exponential(2.0), Exponential(1.0), 1.0) ==
          doctest::Approx(0.300211799553136).epsilon(1e-13));
    CHECK(autocorrelator(Exponential(5.0), Exponential(0.5), 0.3) ==
          doctest::Approx(0.19774884804701).epsilon(1e-13));
}

TEST_CASE("two-exponential closed form matches quadrature on the rate grid") {
    AutocorrelatorOptions quad;
    quad.force_quadrature = true;
    for (double li : {0.5, 1.0, 2.0, 5.0}) {
        for (double lj : {0.5, 1.0, 2.0, 5.0}) {
            for (double h : {0.0, 0.1, 1.0, 5.0}) {
                const double closed = autocorrelator(Exponential(li), Exponential(lj), h);
                const double by_quad =
                    autocorrelator(Exponential(li), Exponential(lj), h, quad);
                CHECK(std::abs(closed - by_quad) < 1e-8);
            }
        }
    }
}

TEST_CASE("self-autocorrelator ratio reproduces the acf for every family") {
    AutocorrelatorOptions quad;
    quad.force_quadrature = true;
    for (const TrawlSpec& spec : grid_of_specs()) {
        const double leb = lebesgue(spec);
        for (double h : {0.0, 0.1, 0.5, 1.0, 2.5}) {
            const double ratio = autocorrelator(spec, spec, h, quad) / leb;
            CHECK(std::abs(ratio - acf(spec, h)) < 1e-8);
        }
    }
}

TEST_CASE("autocorrelator never exceeds either trawl measure") {
    const std::vector<TrawlSpec> specs = grid_of_specs();
    for (const TrawlSpec& a : specs) {
        for (const TrawlSpec& b : specs) {
            const double bound = std::min(lebesgue(a), lebesgue(b));
            for (double h : {0.0, 0.3, 1.7, 6.0}) {
                CHECK(autocorrelator(a, b, h) <= bound * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("mixed-family autocorrelators behave across long lags") {
    // h = 0 self-overlap equals the measure exactly
    for (const TrawlSpec& spec : grid_of_specs())
        CHECK(autocorrelator(spec, spec, 0.0) == doctest::Approx(lebesgue(spec)).epsilon(1e-9));
    // overlap decays in h
    const TrawlSpec a = GammaLongMemory(1.0, 1.5);
    const TrawlSpec b = Exponential(1.0);
    double prev = 1e300;
    for (double h : {0.0, 0.5, 1.0, 3.0, 9.0}) {
        const double r = autocorrelator(a, b, h);
        CHECK(r > 0.0);
        CHECK(r <= prev + 1e-14);
        prev = r;
    }
}

TEST_CASE("gamma-lm partial ACF sums grow at the long-memory rate") {
    for (double hurst : {1.2, 1.3, 1.5}) {
        for (double alpha : {0.5, 1.0}) {
            const TrawlSpec spec = GammaLongMemory(alpha, hurst);
            double s100 = 0.0, s1000 = 0.0, s10000 = 0.0;
            double sum = 0.0;
            for (int h = 1; h <= 10000; ++h) {
                sum += acf(spec, static_cast<double>(h));
                if (h == 100) s100 = sum;
                if (h == 1000) s1000 = sum;
                if (h == 10000) s10000 = sum;
            }
            const double target = std::pow(10.0, 2.0 - hurst);
            CHECK(std::abs(s1000 / s100 - target) / target < 0.10);
            CHECK(std::abs(s10000 / s1000 - target) / target < 0.10);
        }
    }
}

TEST_CASE("envelope_inverse inverts the trawl height") {
    CHECK(envelope_inverse(Exponential(2.0), 1e-6) ==
          doctest::Approx(std::log(1e-6) / 2.0).epsilon(1e-13));
    CHECK(envelope_inverse(GammaLongMemory(1.0, 2.0), 1e-4) == doctest::Approx(-99.0));
    for (const TrawlSpec& spec : grid_of_specs()) {
        if (!is_monotone(spec)) continue;
        for (double eps : {0.5, 1e-3, 1e-9}) {
            const double z = envelope_inverse(spec, eps);
            CHECK(evaluate(spec, z) == doctest::Approx(eps).epsilon(1e-8));
        }
    }
}

TEST_CASE("tail_mass is the exact partial integral") {
    QuadOptions opts;
    opts.rel_tol = 1e-11;
    for (const TrawlSpec& spec : grid_of_specs()) {
        const double z = -3.7;
        const double deep = envelope_inverse(spec, 1e-13) - 1.0;
        std::vector<double> points{deep};
        for (double edge = 2.0 * z; edge > deep; edge *= 2.0) points.push_back(edge);
        points.push_back(z);
        std::sort(points.begin(), points.end());
        const double numeric =
            integrate([&](double s) { return evaluate(spec, s); }, points, opts).value +
            tail_mass(spec, deep);
        CHECK(tail_mass(spec, z) == doctest::Approx(numeric).epsilon(1e-8));
    }
}
