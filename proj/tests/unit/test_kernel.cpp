#include <doctest.h>

#include <cmath>

#include "fskmc/generator.hpp"
#include "fskmc/kernel.hpp"
#include "fskmc/partition.hpp"
#include "oracles.hpp"

using namespace fskmc;

TEST_CASE("build_catalog")
{
    const Lattice ring({4});
    const ArrheniusModel m({0.3, 1.0, 1.0, 1.0, 0.0});
    Configuration s(ring, SpinSpace(2));
    auto c = build_catalog(ring, s, all_sites(ring), m);
    CHECK(c.num_events() == 4);
    CHECK(c.total_rate() == doctest::Approx(1.2));

    auto empty = build_catalog(ring, s, {}, m);
    CHECK(empty.num_events() == 0);
    CHECK(empty.total_rate() == 0.0);
    Rng rng(1);
    CHECK_FALSE(empty.sample_next(rng).has_value());

    const Lattice six({6});
    const ArrheniusParams p{0.4, 1.7, 1.2, 0.8, 0.3};
    const Configuration mixed(std::vector<Spin>{1, 1, 0, 1, 0, 0}, SpinSpace(2));
    double hand = 0.0;
    for (Site x = 0; x < 6; ++x) {
        int occ = 0;
        for (Site z : {(x + 1) % 6, (x + 5) % 6})
            occ += mixed[z];
        hand += mixed[x] ? 1.7 * std::exp(-1.2 * (0.8 * occ + 0.3)) : 0.4;
    }
    CHECK(build_catalog(six, mixed, all_sites(six), ArrheniusModel(p)).total_rate() ==
          doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("sample_next statistics")
{
    constexpr int draws = 100000;
    Rng rng(42);
    SUBCASE("equal rates")
    {
        const Lattice ring({4});
        const ArrheniusModel m({1, 1, 0, 0, 0});
        const auto c = build_catalog(ring, Configuration(ring, SpinSpace(2)), all_sites(ring), m);
        std::vector<std::size_t> hits(4);
        for (int i = 0; i < draws; ++i)
            ++hits[c.sample_next(rng)->slot];
        CHECK(oracle::within_multinomial(hits, Eigen::Vector4d::Constant(0.25), 3.0));
    }
    SUBCASE("rates 1 and 3")
    {
        const Lattice ring({2});
        const ArrheniusModel m({1, 3, 0, 0, 0});
        const Configuration s(std::vector<Spin>{0, 1}, SpinSpace(2));
        const auto c = build_catalog(ring, s, all_sites(ring), m);
        std::vector<std::size_t> hits(2);
        for (int i = 0; i < draws; ++i)
            ++hits[c.sample_next(rng)->slot];
        CHECK(oracle::within_multinomial(hits, Eigen::Vector2d(0.25, 0.75), 3.0));
    }
    SUBCASE("waiting time of a single rate-2 event")
    {
        const Lattice ring({4});
        const ArrheniusModel m({2, 1, 0, 0, 0});
        const auto c = build_catalog(ring, Configuration(ring, SpinSpace(2)), {0}, m);
        double sum = 0.0;
        for (int i = 0; i < draws; ++i)
            sum += c.sample_next(rng)->waiting_time;
        // Exp(2): mean 0.5, sd 0.5.
        CHECK(std::abs(sum / draws - 0.5) < 3.0 * 0.5 / std::sqrt(double(draws)));
    }
}

TEST_CASE("run_window edge cases")
{
    const Lattice ring({4});
    Rng rng(3);
    // Kawasaki on a full lattice has no events.
    const KawasakiModel kaw({1, 1, 1, 1, 0});
    Configuration full(ring, SpinSpace(2), 1);
    auto r = run_window(full, ring, all_sites(ring), 10.0, kaw, rng);
    CHECK(r.jumps == 0);
    CHECK(full == Configuration(ring, SpinSpace(2), 1));

    const ArrheniusModel arr({1, 1, 1, 1, 0});
    Configuration s(ring, SpinSpace(2));
    r = run_window(s, ring, all_sites(ring), 0.0, arr, rng);
    CHECK(r.jumps == 0);
    CHECK(s == Configuration(ring, SpinSpace(2)));
}

TEST_CASE("two-state site equilibrates to one half")
{
    const Lattice one({1});
    const ArrheniusModel m({1, 1, 0, 0, 0});
    constexpr int replicas = 10000;
    int occupied = 0;
    for (int r = 0; r < replicas; ++r) {
        Configuration s(one, SpinSpace(2));
        Rng rng(SeedPolicy(9).seed_for(r, 0, 0));
        run_window(s, one, {0}, 5.0, m, rng);
        occupied += s[0];
    }
    CHECK(std::abs(occupied / double(replicas) - 0.5) < 3.0 * 0.5 / std::sqrt(double(replicas)));
}

TEST_CASE("generator matrix")
{
    const Lattice one({1});
    const ArrheniusModel flip({1, 1, 0, 0, 0});
    const DenseMatrix q = generator_matrix(flip, one, std::vector<Site>{0}).dense();
    DenseMatrix expect(2, 2);
    expect << -1, 1, 1, -1;
    CHECK(max_abs(q - expect) == 0.0);

    const Lattice ring({6});
    const ZgbModel zgb({0.3, 1.0});
    const ArrheniusModel arr({1, 1, 1.5, 1, 0.2});
    for (const RateModel* m : std::initializer_list<const RateModel*>{&zgb, &arr}) {
        const auto all = all_sites(ring);
        const auto g = generator_matrix(*m, ring, all);
        const DenseMatrix d = g.dense();
        CHECK(d.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
        bool offdiag_ok = true;
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            for (Eigen::Index j = 0; j < d.cols(); ++j)
                if (i != j && d(i, j) < 0)
                    offdiag_ok = false;
        CHECK(offdiag_ok);

        // Sum of per-cell generators equals the full one.
        const Partition part = Partition::build(ring, {3}, 1, m->update_range());
        DenseMatrix sum = DenseMatrix::Zero(d.rows(), d.cols());
        for (const auto& cell : part.cells())
            sum += generator_matrix(*m, ring, cell.sites).dense();
        CHECK(max_abs(sum - d) < 1e-12);
    }

    CHECK_THROWS_AS(state_space_size(20, 2), OracleScaleError);
}

TEST_CASE("expm agrees with uniformization")
{
    const Lattice ring({5});
    const ArrheniusModel m({1, 1, 1.5, 1, -0.3});
    const DenseMatrix q = generator_matrix(m, ring, all_sites(ring)).dense();
    for (double t : {0.1, 1.0, 3.0}) {
        CHECK(max_abs(expm(q, t) - uniformized_exp(q, t)) < 1e-12);
        CHECK((expm(q, t).rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("full-domain kernel matches exp(TQ)")
{
    const Lattice ring({4});
    const ArrheniusModel m({1, 1, 1, 1, 0.3});
    const double T = 1.0;
    const DenseMatrix p = expm(generator_matrix(m, ring, all_sites(ring)).dense(), T);
    constexpr int replicas = 100000;
    std::vector<std::size_t> counts(16);
    EventCatalog catalog(ring, m, all_sites(ring));
    for (int r = 0; r < replicas; ++r) {
        Configuration s(ring, SpinSpace(2));
        Rng rng(SeedPolicy(5).seed_for(r, 0, 0));
        run_window(s, catalog, T, rng);
        ++counts[encode_state(s)];
    }
    double z = 0;
    CHECK(oracle::within_multinomial(counts, p.row(0).transpose(), 4.0, &z));
    INFO("worst deviation " << z << " sd");
}

TEST_CASE("incremental catalog equals a rebuild")
{
    const Lattice sq({8, 8});
    const ZgbModel zgb({0.45, 1.0});
    const KawasakiModel kaw({1, 1, 1, 1, 0.2});
    for (const RateModel* m : std::initializer_list<const RateModel*>{&zgb, &kaw}) {
        Configuration s(sq, m->spin_space());
        Rng rng(11);
        if (m == &kaw)
            for (Site x = 0; x < sq.size(); ++x)
                s.set(x, rng.uniform() < 0.4 ? 1 : 0);
        // Domain: half the lattice, so anchors near the edge read outside it.
        std::vector<Site> dom;
        for (Site x = 0; x < sq.size() / 2; ++x)
            dom.push_back(x);
        EventCatalog c(sq, *m, dom);
        c.rebuild(s);
        bool match = true;
        for (int step = 0; step < 400; ++step) {
            auto sel = c.sample_next(rng);
            if (!sel)
                break;
            const SiteUpdate& u = choose_update(c.event(*sel), rng);
            s.apply(u);
            c.refresh_around(s, u.targets());
            const auto fresh = build_catalog(sq, s, dom, *m);
            for (std::size_t k = 0; k < dom.size(); ++k)
                if (std::abs(c.rate_at(k) - fresh.rate_at(k)) > 1e-12 ||
                    c.events_at(k).size() != fresh.events_at(k).size()) {
                    match = false;
                    MESSAGE(m->name() << " step " << step << " slot " << k << ": " << c.rate_at(k) << " vs "
                                      << fresh.rate_at(k));
                }
            if (std::abs(c.total_rate() - fresh.total_rate()) > 1e-9 * fresh.total_rate()) {
                match = false;
                MESSAGE("total " << c.total_rate() << " vs " << fresh.total_rate());
            }
            if (!match)
                break;
        }
        CHECK(match);
    }
}

TEST_CASE("same seed, same trajectory")
{
    const Lattice sq({16, 16});
    const ZgbModel m({0.5, 1.0});
    Configuration a(sq, SpinSpace(3)), b(sq, SpinSpace(3));
    Rng ra(77), rb(77);
    const auto ja = run_window(a, sq, all_sites(sq), 3.0, m, ra).jumps;
    const auto jb = run_window(b, sq, all_sites(sq), 3.0, m, rb).jumps;
    CHECK(ja == jb);
    CHECK(ja > 0);
    CHECK(a == b);
}
