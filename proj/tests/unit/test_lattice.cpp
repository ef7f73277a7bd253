#include <doctest.h>

#include <algorithm>

#include "fskmc/lattice.hpp"

using namespace fskmc;

TEST_CASE("site_index wraps and round-trips")
{
    const Lattice sq({4, 4});
    CHECK(sq.site_index(std::vector<int>{0, 0}) == 0);
    CHECK(sq.site_index(std::vector<int>{5, 1}) == 5);
    CHECK(sq.site_index(std::vector<int>{-1, 0}) == 12);
    const Lattice ring({8});
    CHECK(ring.site_index(std::vector<int>{3}) == 3);

    const Lattice box({3, 4, 5});
    for (Site x = 0; x < box.size(); ++x)
        CHECK(box.site_index(box.site_coords(x)) == x);
}

TEST_CASE("neighbors")
{
    const Lattice ring({8});
    CHECK(ring.neighbors(0, 1) == std::vector<Site>{1, 7});
    CHECK(ring.neighbors(0, 0).empty());
    const Lattice sq({4, 4});
    CHECK(sq.neighbors(0, 1).size() == 4);
    CHECK(Lattice({6, 6}).neighbors(0, 2).size() == 12);
    // On a 4x4 torus the offsets (2,0) and (-2,0) land on the same site.
    CHECK(sq.neighbors(0, 2).size() == 10);

    SUBCASE("symmetric")
    {
        const Lattice l({5, 6});
        for (int r : {1, 2, 3})
            for (Site x = 0; x < l.size(); ++x)
                for (Site z : l.neighbors(x, r)) {
                    const auto back = l.neighbors(z, r);
                    CHECK(std::binary_search(back.begin(), back.end(), x));
                }
    }
    SUBCASE("nearest matches radius one")
    {
        const Lattice l({6, 4});
        for (Site x = 0; x < l.size(); ++x) {
            std::vector<Site> nn(l.nearest(x).begin(), l.nearest(x).end());
            std::sort(nn.begin(), nn.end());
            CHECK(nn == l.neighbors(x, 1));
        }
    }
}

TEST_CASE("apply_update")
{
    const Lattice ring({6});
    Configuration s(ring, SpinSpace(2));
    s.apply(SiteUpdate{{2, 1}});
    for (Site x = 0; x < 6; ++x)
        CHECK(s[x] == (x == 2 ? 1 : 0));

    // Exchange of equal values is a no-op.
    const Configuration before = s;
    s.apply(SiteUpdate{{0, s[1]}, {1, s[0]}});
    CHECK(s == before);

    Configuration z(std::vector<Spin>{1, 2, 0, 0}, SpinSpace(3));
    z.apply(SiteUpdate{{0, 0}, {1, 0}});
    CHECK(z.spins()[0] == 0);
    CHECK(z.spins()[1] == 0);

    CHECK_THROWS_AS(s.apply(SiteUpdate{{0, 2}}), InvalidUpdate);
    CHECK_THROWS_AS(s.set(0, 5), InvalidUpdate);
    // A failed update leaves the configuration alone.
    const Configuration keep = s;
    CHECK_THROWS_AS(s.apply(SiteUpdate{{3, 1}, {4, 7}}), InvalidUpdate);
    CHECK(s == keep);
}

TEST_CASE("inverse update restores the configuration")
{
    Configuration s(std::vector<Spin>{0, 1, 2, 1, 0}, SpinSpace(3));
    const Configuration orig = s;
    for (const SiteUpdate& u : {SiteUpdate{{0, 2}}, SiteUpdate{{1, 0}, {2, 0}}, SiteUpdate{{3, 2}, {4, 1}}}) {
        const SiteUpdate inv = s.inverse_of(u);
        s.apply(u);
        s.apply(inv);
        CHECK(s == orig);
    }
}
