#include <doctest.h>

#include "fskmc/exact.hpp"
#include "fskmc/verification.hpp"

using namespace fskmc;

TEST_CASE("oracle suite")
{
    for (const auto& r : run_oracle_suite()) {
        INFO(format_check(r));
        CHECK(r.passed);
    }
}

TEST_CASE("commuting case has no splitting defect")
{
    const ArrheniusModel m({1, 1, 0, 1, 0});
    const Partition p = Partition::build(Lattice({6}), {3}, 1);
    const DenseMatrix qo(color_generator(m, p, Color::O));
    const DenseMatrix qe(color_generator(m, p, Color::E));
    CHECK(max_abs(qo * qe - qe * qo) < 1e-14);
    for (double dt : {0.1, 1.0}) {
        CHECK(lie_defect(qo, qe, dt) < 1e-12);
        CHECK(strang_defect(qo, qe, dt) < 1e-12);
    }
}

TEST_CASE("transition matrices follow the sub-step order")
{
    const ArrheniusModel m({1, 1, 1, 1, 0.3});
    const Partition p = Partition::build(Lattice({6}), {3}, 1);
    const DenseMatrix qo(color_generator(m, p, Color::O));
    const DenseMatrix qe(color_generator(m, p, Color::E));
    const double dt = 0.4;
    // Row vectors: O acts first, so its exponential is on the left.
    CHECK(max_abs(lie_transition(qo, qe, dt) - expm(qo, dt) * expm(qe, dt)) < 1e-14);
    CHECK(max_abs(lie_transition(qo, qe, dt, GroupOrder::EO) - expm(qe, dt) * expm(qo, dt)) < 1e-14);
    CHECK(max_abs(strang_transition(qo, qe, dt) - expm(qo, dt / 2) * expm(qe, dt) * expm(qo, dt / 2)) < 1e-14);
    // Reversible cell generators keep the Gibbs measure invariant under splitting.
    const ArrheniusModel eq(arrhenius_from_exact({1.5, 1.0, 0.7}, 1));
    const DenseMatrix ao(color_generator(eq, p, Color::O));
    const DenseMatrix ae(color_generator(eq, p, Color::E));
    const DenseMatrix full = expm(ao + ae, 200.0);
    const Eigen::RowVectorXd pi = full.row(0);
    CHECK((pi * lie_transition(ao, ae, 1.0) - pi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random/lie defect constants grow with the cell size")
{
    const ArrheniusModel m({1, 1, 1, 1, 1});
    const auto c = lie_vs_random_constants(m, 16, {2, 4}, std::size_t{1} << 16);
    REQUIRE(c.size() == 2);
    CHECK(c[1].ratio > c[0].ratio);
}
