#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fskmc/exact.hpp"
#include "fskmc/observables.hpp"
#include "oracles.hpp"

using namespace fskmc;

TEST_CASE("coverage")
{
    const Lattice ring({4});
    CHECK(coverage(Configuration(ring, SpinSpace(2), 1)) == 1.0);
    CHECK(coverage(Configuration(ring, SpinSpace(2), 0)) == 0.0);
    CHECK(coverage(Configuration(std::vector<Spin>{0, 1, 0, 1}, SpinSpace(2))) == 0.5);
    const auto c = coverages(Configuration(std::vector<Spin>{0, 1, 2, 2, 1, 0, 0}, SpinSpace(3)));
    REQUIRE(c.size() == 3);
    CHECK(c[0] + c[1] + c[2] == doctest::Approx(1.0));
    CHECK(c[2] == doctest::Approx(2.0 / 7.0));
}

TEST_CASE("two_point_correlation")
{
    const Lattice ring({32});
    const auto ones = two_point_correlation(ring, Configuration(ring, SpinSpace(2), 1), 5);
    for (double v : ones)
        CHECK(v == 1.0);
    CHECK_THROWS_AS(two_point_correlation(ring, Configuration(ring, SpinSpace(2)), 32), std::out_of_range);

    const Lattice big({200000});
    Configuration s(big, SpinSpace(2));
    Rng rng(1);
    const double p = 0.3;
    for (Site x = 0; x < big.size(); ++x)
        s.set(x, rng.uniform() < p ? 1 : 0);
    const auto lam = two_point_correlation(big, s, 4);
    CHECK(lam[0] == doctest::Approx(coverage(s)));
    for (int k = 1; k <= 4; ++k)
        CHECK(std::abs(lam[static_cast<std::size_t>(k)] - p * p) < 4.0 * std::sqrt(p * p * (1 - p * p) / 200000.0));

    // Along axis 0 of a 2D lattice.
    const Lattice sq({4, 3});
    Configuration t(sq, SpinSpace(2));
    for (int y = 0; y < 3; ++y)
        t.set(sq.site_index(std::vector<int>{0, y}), 1);
    const auto l2 = two_point_correlation(sq, t, 2);
    CHECK(l2[0] == doctest::Approx(0.25));
    CHECK(l2[1] == 0.0);
}

TEST_CASE("autocorrelation and time averages")
{
    bool degenerate = false;
    const auto flat = autocorrelation(std::vector<double>(50, 3.0), 5, &degenerate);
    CHECK(degenerate);
    for (double v : flat)
        CHECK(v == 1.0);

    Rng rng(2);
    std::vector<double> noise(4000);
    for (auto& v : noise)
        v = rng.uniform();
    const auto acf = autocorrelation(noise, 100);
    CHECK(acf[0] == doctest::Approx(1.0));
    int outside = 0;
    for (std::size_t k = 1; k < acf.size(); ++k)
        outside += std::abs(acf[k]) > 3.0 / std::sqrt(4000.0);
    CHECK(outside <= 2);
    CHECK_THROWS(autocorrelation(noise, 5000));

    const auto c = time_average(std::vector<double>(64, 2.5), 0.2);
    CHECK(c.mean == 2.5);
    CHECK(c.std_error == 0.0);
    std::vector<double> alt(64);
    for (std::size_t i = 0; i < alt.size(); ++i)
        alt[i] = i % 2 ? 1.0 : 3.0;
    CHECK(time_average(alt, 0.0).mean == doctest::Approx(2.0));
    std::vector<double> bern(20000);
    for (auto& v : bern)
        v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    const auto e = time_average(bern, 0.1);
    CHECK(std::abs(e.mean - 0.5) < 3.0 * e.std_error);
    CHECK_THROWS_AS(time_average(std::vector<double>(10, 1.0), 0.2), EstimationError);

    ObservableSeries s;
    s.push(0.0, 1.0);
    CHECK_THROWS(s.push(0.0, 2.0));
}

TEST_CASE("correlation decay fit")
{
    std::vector<double> expo(16), power(16);
    for (int k = 0; k < 16; ++k) {
        expo[static_cast<std::size_t>(k)] = std::exp(-k / 5.0);
        power[static_cast<std::size_t>(k)] = k ? 1.0 / k : 1.0;
    }
    const auto fe = correlation_decay_fit(expo);
    CHECK(fe.alpha == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(fe.xi == doctest::Approx(5.0));
    CHECK(fe.exponential_dominated);
    const auto fp = correlation_decay_fit(power);
    CHECK(fp.alpha == doctest::Approx(1.0));
    CHECK(fp.xi > 1e3);
    CHECK_FALSE(fp.exponential_dominated);
    power[3] = -1.0;
    CHECK_THROWS(correlation_decay_fit(power));
}

TEST_CASE("exact 1D solution")
{
    CHECK(exact_1d_coverage({1.3, 1.0, 1.0}) == doctest::Approx(0.5));
    CHECK(exact_1d_coverage({2.0, 1.0, 2.0}) == doctest::Approx(0.97717).epsilon(1e-4));
    CHECK(exact_1d_coverage({1e-9, 1.0, 5.0}) == doctest::Approx(0.5).epsilon(1e-6));
    for (double b : {0.5, 1.0, 2.0, 4.0}) {
        double prev = 0.0;
        for (double h = -2.0; h <= 4.0; h += 0.125) {
            const double c = exact_1d_coverage({b, 1.0, h});
            CHECK(c >= prev);
            prev = c;
        }
    }

    SUBCASE("correlation against the transfer matrix and exhaustive Gibbs sums")
    {
        for (double b : {0.5, 1.0, 2.0, 4.0})
            for (double h : {0.0, 1.0, 1.7, 3.0}) {
                const IsingExactParams p{b, 1.0, h};
                for (int k = 0; k <= 10; ++k) {
                    const double tm = oracle::transfer_matrix_correlation(4000, p.k_prime(), p.h_prime(), k);
                    CHECK(exact_1d_correlation(p, 0, k) == doctest::Approx(tm).epsilon(1e-9));
                    CHECK(exact_1d_correlation(p, 5, 5 + k) == doctest::Approx(tm).epsilon(1e-9));
                }
                CHECK(exact_1d_correlation(p, 0, 0) == doctest::Approx(exact_1d_coverage(p)));
                if (b <= 2.0) {
                    const auto w = oracle::ising_ring_weights(10, p.k_prime(), p.h_prime());
                    for (int k = 0; k <= 4; ++k)
                        CHECK(exact_1d_correlation(p, 0, k) ==
                              doctest::Approx(oracle::ring_correlation(w, k)).epsilon(0.02));
                }
            }
        // Zero effective field: monotone in the distance.
        const IsingExactParams z{2.0, 1.0, 1.0};
        for (int k = 0; k < 10; ++k)
            CHECK(exact_1d_correlation(z, 0, k + 1) <= exact_1d_correlation(z, 0, k));
    }
}

TEST_CASE("exact 2D solution")
{
    const double bc = critical_beta(1.0);
    CHECK(bc == doctest::Approx(2.0 * std::log(1.0 + std::numbers::sqrt2)).epsilon(1e-14));
    CHECK(bc == doctest::Approx(1.76275).epsilon(1e-5));
    CHECK(critical_beta(2.0) == doctest::Approx(bc / 2.0));
    CHECK(std::sinh(0.5 * bc) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(exact_2d_coverage({1.2, 1.0, 2.0}).value == 0.5);
    CHECK(exact_2d_coverage({2.0, 1.0, 2.0}).value == doctest::Approx(0.9556).epsilon(1e-4));
    double prev = 1.0;
    for (double eps : {1e-1, 1e-3, 1e-5, 1e-7}) {
        const double v = exact_2d_coverage({bc + eps, 1.0, 2.0}).value;
        CHECK(v > 0.5);
        CHECK(v < prev);
        prev = v;
    }
    const auto at = exact_2d_coverage({bc, 1.0, 2.0});
    CHECK(at.near_critical);
    CHECK(at.value == 0.5);
}
