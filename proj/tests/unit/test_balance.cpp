#include <doctest.h>

#include <numeric>
#include <sstream>

#include "fskmc/balance.hpp"
#include "fskmc/commands.hpp"
#include "oracles.hpp"

using namespace fskmc;

namespace {

using Groups = std::vector<std::vector<std::size_t>>;

std::vector<double> random_weights(Rng& rng, std::size_t m)
{
    std::vector<double> w(m);
    double s = 0;
    for (auto& v : w) {
        v = std::pow(rng.uniform(), 3.0);
        s += v;
    }
    for (auto& v : w)
        v /= s;
    return w;
}

}  // namespace

TEST_CASE("record_workload")
{
    auto h = make_histogram({10, 10, 10, 10}, 1);
    CHECK_FALSE(h.quiescent);
    for (double v : h.normalized)
        CHECK(v == doctest::Approx(0.25));
    h = make_histogram({0, 0, 0, 0}, 2);
    CHECK(h.quiescent);
    h = make_histogram({70, 10, 10, 10}, 3);
    CHECK(h.normalized[0] == doctest::Approx(0.7));
    CHECK(h.normalized[3] == doctest::Approx(0.1));

    std::vector<WindowResult> res(3);
    res[1].jumps = 4;
    CHECK(record_workload(res, 5).counts == std::vector<std::uint64_t>{0, 4, 0});

    WorkloadLog log;
    log.append(make_histogram({1, 2}, 1));
    std::ostringstream os;
    log.write_csv(os);
    CHECK(os.str() == "window,cell,jumps\n1,0,1\n1,1,2\n");
}

TEST_CASE("rebalance_assignment")
{
    CHECK(rebalance_assignment(std::vector<double>{.25, .25, .25, .25}, 2).groups == Groups{{0, 1}, {2, 3}});
    const std::vector<double> w{.7, .1, .1, .1};
    const auto a = rebalance_assignment(w, 2);
    CHECK(a.groups == Groups{{0}, {1, 2, 3}});
    CHECK(max_worker_load(a, w) == doctest::Approx(0.7));
    CHECK(rebalance_assignment(w, 1).groups == Groups{{0, 1, 2, 3}});
    CHECK_THROWS(rebalance_assignment(w, 5));

    SUBCASE("never worse than equal counts and optimal for small cases")
    {
        Rng rng(5);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t m = 2 + rng.below(11);
            const std::size_t p = 1 + rng.below(m);
            const auto wt = random_weights(rng, m);
            const auto r = rebalance_assignment(wt, p);
            CHECK(r.num_workers() == p);
            // Contiguous, complete, nonempty.
            std::size_t next = 0;
            for (const auto& g : r.groups) {
                CHECK_FALSE(g.empty());
                for (std::size_t c : g)
                    CHECK(c == next++);
            }
            CHECK(next == m);
            const double load = max_worker_load(r, wt);
            CHECK(load <= max_worker_load(equal_count_assignment(m, p), wt) + 1e-12);
            CHECK(max_worker_load(optimal_contiguous_assignment(wt, p), wt) ==
                  doctest::Approx(oracle::best_contiguous_max_load(wt, p)));
            CHECK(load == doctest::Approx(oracle::best_contiguous_max_load(wt, p)));
        }
    }
}

TEST_CASE("rebalance_cells_1d")
{
    const std::vector<int> b{0, 4, 8, 12};
    auto r = rebalance_cells_1d(std::vector<double>{.25, .25, .25, .25}, b, 16, 1, 2);
    REQUIRE(r.boundaries);
    CHECK(*r.boundaries == b);

    // All mass in the first strip: it shrinks to the minimum extent.
    r = rebalance_cells_1d(std::vector<double>{1, 0, 0, 0}, b, 16, 1, 2);
    REQUIRE(r.boundaries);
    CHECK(*r.boundaries == std::vector<int>{0, 2, 4, 6});

    // Two strips, mass on the left one: boundary at the left strip's median.
    r = rebalance_cells_1d(std::vector<double>{1, 0}, std::vector<int>{0, 8}, 16, 1, 2);
    REQUIRE(r.boundaries);
    CHECK(*r.boundaries == std::vector<int>{0, 4});

    // Minimum extents cannot be met.
    r = rebalance_cells_1d(std::vector<double>{.25, .25, .25, .25}, b, 16, 1, 5);
    CHECK_FALSE(r.boundaries);
    CHECK_FALSE(r.warning.empty());

    SUBCASE("extents sum to N, respect the minimum and are idempotent")
    {
        Rng rng(8);
        for (int trial = 0; trial < 200; ++trial) {
            const auto w = random_weights(rng, 6);
            const std::vector<int> old{0, 10, 20, 30, 40, 50};
            const int g = 1 + static_cast<int>(rng.below(3));
            const auto s = rebalance_cells_1d(w, old, 60, g, 3);
            REQUIRE(s.boundaries);
            const auto& nb = *s.boundaries;
            CHECK(nb.front() == 0);
            int total = 0;
            for (std::size_t i = 0; i < nb.size(); ++i) {
                const int ext = (i + 1 < nb.size() ? nb[i + 1] : 60) - nb[i];
                CHECK(ext >= 3);
                total += ext;
            }
            CHECK(total == 60);
            const auto moved = remap_workload(w, old, nb, 60);
            CHECK(std::accumulate(moved.begin(), moved.end(), 0.0) == doctest::Approx(1.0));
            const auto again = rebalance_cells_1d(w, old, 60, g, 3);
            CHECK(*again.boundaries == nb);
        }
    }
}

TEST_CASE("rebalance_trigger")
{
    CHECK_FALSE(rebalance_trigger(make_histogram({5, 5, 5, 5}, 10), 10, 1.5));
    CHECK(rebalance_trigger(make_histogram({70, 10, 10, 10}, 10), 10, 2.0));
    CHECK_FALSE(rebalance_trigger(make_histogram({70, 10, 10, 10}, 11), 10, 2.0));
    CHECK_FALSE(rebalance_trigger(make_histogram({0, 0, 0, 0}, 10), 10, 2.0));
    CHECK_THROWS(rebalance_trigger(make_histogram({1, 1}, 10), 10, 0.5));
}

TEST_CASE("balance demo")
{
    std::ostringstream log;
    const auto r = cmd_balance_demo({}, log);
    REQUIRE(r.triggered);
    CHECK(r.post_max <= 0.6 * r.pre_max);
    CHECK(r.after_on_trigger == doctest::Approx(oracle::best_contiguous_max_load(r.trigger_weights, 4)));
}
