#include "fskmc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include "fskmc/engine.hpp"
#include "fskmc/kernel.hpp"
#include "fskmc/observables.hpp"

namespace fskmc {

std::string format_check(const CheckResult& r)
{
    return fmt::format("{} {}: value {:.6g}, bound {:.3g}{}{}", r.passed ? "PASS" : "FAIL", r.name, r.value,
                       r.tolerance, r.detail.empty() ? "" : "; ", r.detail);
}

SparseMatrix color_generator(const RateModel& model, const Partition& partition, Color c, std::size_t max_states)
{
    const auto sites = partition.sites_of(c);
    return generator_matrix(model, partition.lattice(), sites, max_states).q;
}

SparseMatrix color_boundary_generator(const RateModel& model, const Partition& partition, Color c, bool boundary,
                                      std::size_t max_states)
{
    std::vector<Site> sites;
    for (std::size_t m : partition.cells_of(c)) {
        const auto& cell = partition.cells()[m];
        const auto& part = boundary ? cell.boundary : cell.interior;
        sites.insert(sites.end(), part.begin(), part.end());
    }
    std::sort(sites.begin(), sites.end());
    return generator_matrix(model, partition.lattice(), sites, max_states).q;
}

DenseMatrix lie_transition(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt, GroupOrder order)
{
    const DenseMatrix po = expm(q_o, dt);
    const DenseMatrix pe = expm(q_e, dt);
    return order == GroupOrder::OE ? DenseMatrix(po * pe) : DenseMatrix(pe * po);
}

DenseMatrix strang_transition(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt, GroupOrder order)
{
    const bool oe = order == GroupOrder::OE;
    const DenseMatrix half = expm(oe ? q_o : q_e, dt / 2);
    const DenseMatrix full = expm(oe ? q_e : q_o, dt);
    return half * full * half;
}

DenseMatrix random_transition(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt)
{
    return 0.5 * (expm(q_o, dt) + expm(q_e, dt));
}

double lie_defect(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt)
{
    const DenseMatrix q = q_o + q_e;
    return inf_norm(expm(q, dt) - lie_transition(q_o, q_e, dt));
}

double strang_defect(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt)
{
    const DenseMatrix q = q_o + q_e;
    return inf_norm(expm(q, dt) - strang_transition(q_o, q_e, dt));
}

double random_defect(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt)
{
    const DenseMatrix q = q_o + q_e;
    return inf_norm(expm(q, dt / 2) - random_transition(q_o, q_e, dt));
}

CheckResult check_additivity(const RateModel& model, const Partition& partition, double tol)
{
    const auto all = all_sites(partition.lattice());
    const DenseMatrix full = DenseMatrix(generator_matrix(model, partition.lattice(), all).q);
    DenseMatrix sum = DenseMatrix::Zero(full.rows(), full.cols());
    for (const auto& cell : partition.cells())
        sum += DenseMatrix(generator_matrix(model, partition.lattice(), cell.sites).q);
    CheckResult r;
    r.name = "generator additivity Q = sum of cell generators";
    r.value = max_abs(full - sum);
    r.tolerance = tol;
    r.passed = r.value <= tol;
    r.detail = fmt::format("{} cells, {} states", partition.num_cells(), full.rows());
    return r;
}

CheckResult check_factorization(const RateModel& model, const Partition& partition, Color c, double dt, double tol)
{
    const DenseMatrix qc = DenseMatrix(color_generator(model, partition, c));
    DenseMatrix product = DenseMatrix::Identity(qc.rows(), qc.cols());
    for (std::size_t m : partition.cells_of(c)) {
        const DenseMatrix qm = DenseMatrix(generator_matrix(model, partition.lattice(), partition.cells()[m].sites).q);
        product = product * expm(qm, dt);
    }
    CheckResult r;
    r.name = fmt::format("same-color factorization ({}, dt={})", color_name(c), dt);
    r.value = max_abs(expm(qc, dt) - product);
    r.tolerance = tol;
    r.passed = r.value <= tol;
    return r;
}

namespace {

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) { return a * b - b * a; }

}  // namespace

std::vector<CheckResult> check_commutator_support(const RateModel& model, const Partition& partition, double tol)
{
    const DenseMatrix qe = DenseMatrix(color_generator(model, partition, Color::E));
    const DenseMatrix qo = DenseMatrix(color_generator(model, partition, Color::O));
    const DenseMatrix qe_b = DenseMatrix(color_boundary_generator(model, partition, Color::E, true));
    const DenseMatrix qo_b = DenseMatrix(color_boundary_generator(model, partition, Color::O, true));
    const DenseMatrix qe_i = DenseMatrix(color_boundary_generator(model, partition, Color::E, false));
    const DenseMatrix qo_i = DenseMatrix(color_boundary_generator(model, partition, Color::O, false));

    const DenseMatrix full = commutator(qe, qo);
    std::vector<CheckResult> out;
    auto add = [&](std::string name, double v, std::string detail = {}) {
        CheckResult r;
        r.name = std::move(name);
        r.value = v;
        r.tolerance = tol;
        r.passed = v <= tol;
        r.detail = std::move(detail);
        out.push_back(std::move(r));
    };
    add("commutator equals its boundary reconstruction", max_abs(full - commutator(qe_b, qo_b)),
        fmt::format("max |[Q^E,Q^O]| = {:.4g}", max_abs(full)));
    add("interior commutator [Q^E,o, Q^O,o] vanishes", max_abs(commutator(qe_i, qo_i)));
    add("cross commutator [Q^E,b, Q^O,o] vanishes", max_abs(commutator(qe_b, qo_i)));
    add("cross commutator [Q^E,o, Q^O,b] vanishes", max_abs(commutator(qe_i, qo_b)));
    return out;
}

CheckResult check_defect_ratio(ScheduleKind kind, const RateModel& model, const Partition& partition, double dt,
                               double lo, double hi)
{
    const DenseMatrix qe = DenseMatrix(color_generator(model, partition, Color::E));
    const DenseMatrix qo = DenseMatrix(color_generator(model, partition, Color::O));
    auto defect = [&](double h) {
        switch (kind) {
        case ScheduleKind::lie: return lie_defect(qo, qe, h);
        case ScheduleKind::strang: return strang_defect(qo, qe, h);
        case ScheduleKind::random: return random_defect(qo, qe, h);
        case ScheduleKind::custom: break;
        }
        throw ScheduleError("defect ratio is defined for lie, strang and random schedules");
    };
    const double coarse = defect(dt);
    const double fine = defect(dt / 2);
    CheckResult r;
    r.name = fmt::format("{} local defect ratio at dt={}", schedule_kind_name(kind), dt);
    r.value = coarse / fine;
    r.tolerance = hi;
    r.passed = r.value >= lo && r.value <= hi;
    r.detail = fmt::format("window [{}, {}], defects {:.4g} / {:.4g}", lo, hi, coarse, fine);
    return r;
}

CheckResult check_random_taylor(const RateModel& model, const Partition& partition, double dt)
{
    const DenseMatrix qe = DenseMatrix(color_generator(model, partition, Color::E));
    const DenseMatrix qo = DenseMatrix(color_generator(model, partition, Color::O));
    const DenseMatrix q = qe + qo;
    const DenseMatrix diff = qe - qo;
    const DenseMatrix leading = 0.25 * diff * diff;
    auto remainder = [&](double h) {
        const DenseMatrix mean = random_transition(qo, qe, h);
        const DenseMatrix two = mean * mean;
        return inf_norm((two - expm(q, h)) / (h * h) - leading) / inf_norm(leading);
    };
    const double r1 = remainder(dt);
    const double r2 = remainder(dt / 2);
    CheckResult r;
    r.name = fmt::format("random schedule mean defect = (Q^E-Q^O)^2 dt^2 / 4 + O(dt^3), dt={}", dt);
    r.value = r1 / r2;
    r.tolerance = 2.6;
    r.passed = r.value >= 1.5 && r.value <= 2.6 && r1 < 1.0;
    r.detail = fmt::format("relative remainders {:.4g} / {:.4g}, window [1.5, 2.6]", r1, r2);
    return r;
}

CheckResult check_averaged_generator(const RateModel& model, const Partition& partition, double tol)
{
    const SparseMatrix qe = color_generator(model, partition, Color::E);
    const SparseMatrix qo = color_generator(model, partition, Color::O);
    const SparseMatrix q = generator_matrix(model, partition.lattice(), all_sites(partition.lattice())).q;
    CheckResult r;
    r.name = "averaged generator (Q^O + Q^E) / 2 = Q / 2";
    r.value = max_abs(DenseMatrix(0.5 * (qe + qo) - 0.5 * q));
    r.tolerance = tol;
    r.passed = r.value <= tol;
    return r;
}

std::vector<DefectConstants> lie_vs_random_constants(const RateModel& model, int num_sites,
                                                     const std::vector<int>& cell_sizes, std::size_t max_states)
{
    const Lattice lat({num_sites});
    const SpinSpace space = model.spin_space();
    const Eigen::VectorXd f = observable_vector(lat.size(), space, [](const Configuration& s) { return coverage(s); });
    const double n = static_cast<double>(f.size());
    std::vector<DefectConstants> out;
    for (int q : cell_sizes) {
        const Partition p = Partition::build(lat, {q}, model.interaction_range(), model.update_range());
        const SparseMatrix qe = color_generator(model, p, Color::E, max_states);
        const SparseMatrix qo = color_generator(model, p, Color::O, max_states);
        const Eigen::VectorXd comm = 0.5 * (qe * (qo * f) - qo * (qe * f));
        const SparseMatrix diff = qe - qo;
        const Eigen::VectorXd sq = 0.25 * (diff * (diff * f));
        DefectConstants d;
        d.cell_size = q;
        d.lie = std::sqrt(comm.squaredNorm() / n);
        d.random = std::sqrt(sq.squaredNorm() / n);
        d.ratio = d.random / d.lie;
        out.push_back(d);
    }
    return out;
}

DenseMatrix nested_lie_transition(const RateModel& model, const NestedPartition& nested, double dt)
{
    const Partition& outer = nested.outer();
    const Lattice& lat = outer.lattice();
    DenseMatrix result;
    for (Color outer_color : {Color::O, Color::E}) {
        for (Color inner_color : {Color::O, Color::E}) {
            std::vector<Site> anchors;
            for (std::size_t m : outer.cells_of(outer_color))
                for (std::size_t t : nested.inner_of(m, inner_color)) {
                    const auto& s = nested.inner(m)[t].sites;
                    anchors.insert(anchors.end(), s.begin(), s.end());
                }
            std::sort(anchors.begin(), anchors.end());
            const DenseMatrix step = expm(DenseMatrix(generator_matrix(model, lat, anchors).q), dt);
            result = result.size() ? DenseMatrix(result * step) : step;
        }
    }
    return result;
}

std::vector<CheckResult> run_oracle_suite(const OracleSuiteOptions& opt)
{
    const ArrheniusModel model(opt.params);
    const Lattice lat({opt.num_sites});
    const Partition p = Partition::build(lat, {opt.cell_size}, 1);
    std::vector<CheckResult> out;
    out.push_back(check_additivity(model, p));
    for (double dt : {0.1, 1.0})
        for (Color c : {Color::E, Color::O})
            out.push_back(check_factorization(model, p, c, dt));

    const Lattice lat8({opt.commutator_sites});
    for (int q : {4, 2}) {
        const Partition p8 = Partition::build(lat8, {q}, 1);
        for (auto& r : check_commutator_support(model, p8)) {
            r.name += fmt::format(" (N={}, q={})", opt.commutator_sites, q);
            out.push_back(std::move(r));
        }
    }
    out.push_back(check_averaged_generator(model, p));
    out.push_back(check_defect_ratio(ScheduleKind::lie, model, p, opt.ratio_dt, 3.3, 4.7));
    out.push_back(check_defect_ratio(ScheduleKind::strang, model, p, opt.ratio_dt, 6.0, 10.0));
    out.push_back(check_defect_ratio(ScheduleKind::random, model, p, opt.ratio_dt, 3.3, 4.7));
    out.push_back(check_random_taylor(model, p, 0.1));

    // Commuting case: constant rates make every splitting exact.
    ArrheniusParams flat = opt.params;
    flat.beta = 0.0;
    const ArrheniusModel commuting(flat);
    const DenseMatrix qe = DenseMatrix(color_generator(commuting, p, Color::E));
    const DenseMatrix qo = DenseMatrix(color_generator(commuting, p, Color::O));
    CheckResult zero;
    zero.name = "commuting case (beta=0) has zero Lie defect";
    zero.value = lie_defect(qo, qe, 1.0);
    zero.tolerance = 1e-12;
    zero.passed = zero.value <= zero.tolerance;
    out.push_back(zero);
    return out;
}

namespace {

std::vector<double> replicate(std::size_t replicas, const std::function<double(std::size_t)>& one)
{
    std::vector<double> values(replicas);
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, replicas, 64), [&](const tbb::blocked_range<std::size_t>& r) {
        for (std::size_t i = r.begin(); i != r.end(); ++i)
            values[i] = one(i);
    });
    return values;
}

}  // namespace

WeakErrorResult weak_error_order(const WeakErrorSetup& setup)
{
    if (!setup.model || !setup.partition || !setup.observable)
        throw std::invalid_argument("weak-error setup needs a model, a partition and an observable");
    const RateModel& model = *setup.model;
    const Partition& partition = *setup.partition;
    const Lattice& lat = partition.lattice();
    const SpinSpace space = model.spin_space();
    const SeedPolicy master(setup.seed);
    WeakErrorResult res;

    // Reference: exact when the configuration space is small enough.
    std::size_t states = 0;
    try {
        states = state_space_size(lat.size(), space.num_states(), setup.oracle_limit);
    } catch (const OracleScaleError&) {
        states = 0;
    }
    if (states) {
        const DenseMatrix q = DenseMatrix(generator_matrix(model, lat, all_sites(lat), setup.oracle_limit).q);
        const Eigen::VectorXd f = observable_vector(lat.size(), space, setup.observable);
        const Configuration start(lat, space, setup.initial);
        const Eigen::VectorXd ef = expm(q, setup.horizon) * f;
        res.reference = ef(static_cast<Eigen::Index>(encode_state(start)));
        res.oracle_reference = true;
    } else {
        const SeedPolicy serial_seeds = master.replica(0x5e71a1);
        auto values = replicate(setup.replicas, [&](std::size_t r) {
            Configuration sigma(lat, space, setup.initial);
            run_serial(sigma, lat, model, setup.horizon, setup.horizon, serial_seeds.replica(r));
            return setup.observable(sigma);
        });
        const Estimate e = sample_mean(values);
        res.reference = e.mean;
        res.reference_se = e.std_error;
    }

    std::vector<double> dts = setup.dts;
    std::sort(dts.begin(), dts.end(), std::greater<>());
    for (std::size_t k = 0; k < dts.size(); ++k) {
        const Schedule sched = make_schedule(setup.kind, dts[k], setup.horizon);
        const SeedPolicy dt_seeds = master.replica(k + 1);
        std::vector<double> values(setup.replicas);
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, setup.replicas, 64),
                          [&](const tbb::blocked_range<std::size_t>& range) {
                              FractionalStepEngine engine(partition, model, SeedPolicy(0), 1);
                              for (std::size_t r = range.begin(); r != range.end(); ++r) {
                                  engine.set_seeds(dt_seeds.replica(r));
                                  Configuration sigma(lat, space, setup.initial);
                                  engine.run(sigma, sched);
                                  values[r] = setup.observable(sigma);
                              }
                          });
        const Estimate e = sample_mean(values);
        WeakErrorPoint pt;
        pt.dt = dts[k];
        pt.mean = e.mean;
        pt.std_error = e.std_error;
        pt.error = std::abs(e.mean - res.reference);
        pt.error_se = std::hypot(e.std_error, res.reference_se);
        res.points.push_back(pt);
    }

    res.monotone = true;
    for (std::size_t k = 1; k < res.points.size(); ++k)
        res.monotone = res.monotone && res.points[k].error < res.points[k - 1].error;
    const std::size_t n = res.points.size();
    for (std::size_t k = n >= 2 ? n - 2 : 0; k < n; ++k)
        res.inconclusive = res.inconclusive || res.points[k].error < 3.0 * res.points[k].error_se;

    if (n >= 2 && !res.inconclusive) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : res.points) {
            const double x = std::log(p.dt);
            const double y = std::log(p.error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double dn = static_cast<double>(n);
        res.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    }
    res.passed = !res.inconclusive && res.monotone && res.slope >= setup.min_slope;
    if (res.inconclusive)
        res.status = "inconclusive: statistical noise dominates the smallest dt";
    else if (!res.monotone)
        res.status = "errors do not decrease monotonically";
    else if (res.slope < setup.min_slope)
        res.status = fmt::format("slope {:.3f} below {}", res.slope, setup.min_slope);
    else
        res.status = fmt::format("slope {:.3f}", res.slope);
    return res;
}

}  // namespace fskmc
