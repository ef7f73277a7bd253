#include "fskmc/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fskmc/exact.hpp"
#include "fskmc/observables.hpp"

namespace fskmc {

namespace {

std::string state_name(const RateModel& model, Spin s)
{
    if (model.name() == "zgb") {
        switch (s) {
        case zgb::kVacant: return "vacant";
        case zgb::kCO: return "CO";
        case zgb::kO: return "O";
        default: break;
        }
    }
    return fmt::format("state{}", int(s));
}

Configuration initial_configuration(const RunConfig& cfg, const Lattice& lattice, const RateModel& model)
{
    Configuration sigma(lattice, model.spin_space(), cfg.initial);
    Rng rng(SeedPolicy(cfg.seed).seed_for(~std::uint64_t{0}, 0, ~std::uint64_t{0}));
    if (cfg.initial_density) {
        for (Site x = 0; x < lattice.size(); ++x)
            sigma.set(x, rng.uniform() < *cfg.initial_density ? Spin{1} : Spin{0});
    } else if (cfg.profile == "ramp") {
        const double half = lattice.extent(0) / 2.0;
        std::vector<int> c(lattice.dims().size());
        for (Site x = 0; x < lattice.size(); ++x) {
            lattice.site_coords(x, c);
            sigma.set(x, rng.uniform() < std::min(1.0, c[0] / half) ? Spin{1} : Spin{0});
        }
    }
    return sigma;
}

std::string num(double v) { return fmt::format("{:.10g}", v); }

}  // namespace

RunSummary simulate(const RunConfig& cfg, std::ostream& results, std::ostream* workload, std::ostream& log)
{
    validate_config(cfg);
    const auto model = make_model(cfg);
    const Lattice lattice(cfg.dims);
    const Schedule schedule = make_run_schedule(cfg);
    for (const auto& w : schedule.warnings)
        fmt::print(log, "warning: {}\n", w);

    FractionalStepEngine engine(make_partition(cfg, lattice, *model), *model, SeedPolicy(cfg.seed), cfg.workers);
    if (!cfg.inner.empty())
        engine.enable_nesting(cfg.inner, cfg.inner_dt);
    Configuration sigma = initial_configuration(cfg, lattice, *model);

    // Series per observable name, in first-seen order.
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    auto record = [&](const std::string& name, double t, double v) {
        std::size_t i = 0;
        while (i < names.size() && names[i] != name)
            ++i;
        if (i == names.size()) {
            names.push_back(name);
            series.emplace_back();
        }
        series[i].push_back(v);
        results << fmt::format("{},{},{},{},\n", cfg.run_id, num(t), name, num(v));
    };

    results << "run_id,time,observable,value,stderr\n";
    const int num_states = model->spin_space().num_states();
    Observer observer = [&](double t, std::size_t, const Configuration& s) {
        for (const auto& o : cfg.observables) {
            if (o == "coverage") {
                record("coverage", t, coverage(s));
            } else if (o == "coverages") {
                const auto c = coverages(s);
                for (int k = 0; k < num_states; ++k)
                    record("coverage_" + state_name(*model, static_cast<Spin>(k)), t, c[static_cast<std::size_t>(k)]);
            } else if (o == "correlation") {
                const auto lam = two_point_correlation(lattice, s, cfg.k_max);
                for (std::size_t k = 0; k < lam.size(); ++k)
                    record(fmt::format("correlation_k{}", k), t, lam[k]);
            }
        }
    };

    WorkloadLog wlog;
    const int min_strip = model->interaction_range() + model->update_range() + 1;
    WindowHook hook = [&](FractionalStepEngine& eng, std::size_t w, const std::vector<std::uint64_t>& jumps) {
        wlog.append(make_histogram(jumps, w + 1));
        if (!cfg.balance.enabled || !rebalance_trigger(wlog, cfg.balance.cadence, cfg.balance.theta))
            return;
        const auto& h = wlog.latest();
        if (cfg.balance.mode == "assign") {
            const std::size_t p = std::min(eng.workers(), eng.partition().num_cells());
            eng.set_assignment(rebalance_assignment(h, p));
            return;
        }
        const auto& old = eng.partition().strip_boundaries();
        auto r = rebalance_cells_1d(h.normalized, old, lattice.extent(0), cfg.balance.granularity, min_strip);
        if (!r.boundaries) {
            fmt::print(log, "warning: window {}: {}\n", h.window, r.warning);
            return;
        }
        if (*r.boundaries == old)
            return;
        try {
            eng.set_partition(Partition::strips(lattice, *r.boundaries, model->interaction_range(),
                                                model->update_range()));
        } catch (const PartitionError& e) {
            fmt::print(log, "warning: window {}: re-balanced strips rejected ({}); strips kept\n", h.window, e.what());
        }
    };

    const RunSummary summary = engine.run(sigma, schedule, observer, cfg.stride, hook);

    for (std::size_t i = 0; i < names.size(); ++i) {
        try {
            const Estimate e = time_average(series[i], cfg.burn_in);
            results << fmt::format("{},{},mean_{},{},{}\n", cfg.run_id, num(summary.physical_time), names[i],
                                   num(e.mean), num(e.std_error));
        } catch (const EstimationError& e) {
            fmt::print(log, "note: no time average for {}: {}\n", names[i], e.what());
        }
    }
    if (workload)
        wlog.write_csv(*workload);
    return summary;
}

RunSummary cmd_run(const RunConfig& cfg, std::ostream& log)
{
    std::ofstream results(cfg.results_path, std::ios::binary);
    if (!results)
        throw ConfigError(fmt::format("output.results: cannot write '{}'", cfg.results_path), "output.results");
    std::ofstream workload;
    if (!cfg.workload_path.empty()) {
        workload.open(cfg.workload_path, std::ios::binary);
        if (!workload)
            throw ConfigError(fmt::format("output.workload: cannot write '{}'", cfg.workload_path), "output.workload");
    }
    return simulate(cfg, results, cfg.workload_path.empty() ? nullptr : &workload, log);
}

bool cmd_verify(const VerifyOptions& opt, std::ostream& out)
{
    bool ok = true;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& r : run_oracle_suite(opt.oracle)) {
        out << format_check(r) << '\n';
        ok = ok && r.passed;
    }

    const ArrheniusModel model(opt.oracle.params);
    const auto constants = lie_vs_random_constants(model, 16, {2, 4, 8}, std::size_t{1} << 16);
    out << "defect constants on the coverage observable (N=16):\n";
    bool grows = true;
    for (std::size_t i = 0; i < constants.size(); ++i) {
        const auto& c = constants[i];
        out << fmt::format("  q={:<2} lie {:.6g}  random {:.6g}  random/lie {:.4g}\n", c.cell_size, c.lie, c.random,
                           c.ratio);
        if (i > 0)
            grows = grows && c.ratio > constants[i - 1].ratio;
    }
    out << fmt::format("{} random/lie defect constant ratio increases with q (directional)\n", grows ? "PASS" : "FAIL");
    ok = ok && grows;

    if (opt.weak_error) {
        ArrheniusParams p = opt.oracle.params;
        const ArrheniusModel m(p);
        const Lattice lat({64});
        const Partition part = Partition::build(lat, {2}, 1);
        WeakErrorSetup s;
        s.model = &m;
        s.partition = &part;
        s.replicas = opt.replicas;
        s.observable = [](const Configuration& c) { return coverage(c); };
        const auto r = weak_error_order(s);
        for (const auto& pt : r.points)
            out << fmt::format("  dt={:<5} mean {:.6f} +- {:.6f}  error {:.6f}\n", pt.dt, pt.mean, pt.std_error,
                               pt.error);
        out << fmt::format("{} weak error order (N=64, T=5): {}\n", r.passed ? "PASS" : "FAIL", r.status);
        ok = ok && r.passed;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << fmt::format("{} ({:.2f} s)\n", ok ? "all checks passed" : "some checks FAILED", secs);
    return ok;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2)
        throw std::invalid_argument("slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::log(x[i]);
        const double b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

BenchmarkReport cmd_benchmark(const BenchmarkOptions& opt, std::ostream& csv, std::ostream& log)
{
    using clock = std::chrono::steady_clock;
    if (opt.dimension != 1 && opt.dimension != 2)
        throw std::invalid_argument("benchmark dimension must be 1 or 2");
    BenchmarkReport report;
    csv << "size,workers,schedule,dt,wall_seconds,jumps_per_second\n";

    std::unique_ptr<RateModel> model;
    if (opt.model == "zgb")
        model = std::make_unique<ZgbModel>(ZgbParams{0.4, 1.0});
    else if (opt.model == "arrhenius")
        model = std::make_unique<ArrheniusModel>(arrhenius_from_exact({2.0, 1.0, 1.0}, opt.dimension));
    else
        throw std::invalid_argument(fmt::format("benchmark model must be arrhenius or zgb, not '{}'", opt.model));

    auto emit = [&](const BenchmarkRow& r) {
        csv << fmt::format("{},{},{},{},{:.6f},{:.1f}\n", r.size, r.workers, r.schedule, r.dt, r.wall_seconds,
                           r.jumps_per_second);
        report.rows.push_back(r);
    };

    std::vector<double> ns, times;
    for (int size : opt.sizes) {
        std::vector<int> dims = opt.dimension == 1 ? std::vector<int>{size} : std::vector<int>{size, size};
        const Lattice lat(dims);
        std::vector<int> extent = dims;
        extent[0] = opt.cell;
        const Partition part = Partition::build(lat, extent, model->interaction_range(), model->update_range());
        const Schedule sched = make_schedule(parse_schedule_kind(opt.schedule), opt.dt, opt.horizon);

        if (opt.serial) {
            Configuration sigma(lat, model->spin_space(), 0);
            const auto t0 = clock::now();
            const auto s = run_serial(sigma, lat, *model, opt.horizon, opt.dt, SeedPolicy(opt.seed));
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            emit({lat.size(), 0, "serial", opt.dt, secs, static_cast<double>(s.jumps) / secs});
        }
        for (std::size_t k = 0; k < opt.workers.size(); ++k) {
            FractionalStepEngine engine(part, *model, SeedPolicy(opt.seed), opt.workers[k]);
            Configuration sigma(lat, model->spin_space(), 0);
            const auto t0 = clock::now();
            const auto s = engine.run(sigma, sched);
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            emit({lat.size(), opt.workers[k], opt.schedule, opt.dt, secs, static_cast<double>(s.jumps) / secs});
            if (k == 0) {
                ns.push_back(static_cast<double>(lat.size()));
                times.push_back(secs);
            }
        }
    }
    if (ns.size() >= 2) {
        report.slope = loglog_slope(ns, times);
        fmt::print(log, "log-log slope of wall time against N ({} worker(s)): {:.3f}\n",
                   opt.workers.empty() ? 0 : opt.workers[0], report.slope);
    }
    return report;
}

BalanceDemoResult cmd_balance_demo(const BalanceDemoOptions& opt, std::ostream& log)
{
    const int n = opt.cells * opt.cell_size;
    const Lattice lat({n});
    const ArrheniusModel model(opt.params);
    const Partition part = Partition::build(lat, {opt.cell_size}, 1);
    FractionalStepEngine engine(part, model, SeedPolicy(opt.seed), opt.threads);
    engine.set_assignment(equal_count_assignment(part.num_cells(), opt.workers));

    // Occupation probability rises from 0 at the left end to 1 at the middle.
    Configuration sigma(lat, model.spin_space(), 1);
    Rng rng(opt.seed);
    const int half = n / 2;
    for (int x = 0; x < half; ++x)
        sigma.set(static_cast<Site>(x), rng.uniform() < static_cast<double>(x) / half ? Spin{1} : Spin{0});

    BalanceDemoResult res;
    res.before = engine.assignment();
    const Schedule sched = make_schedule(ScheduleKind::lie, opt.dt, opt.dt * static_cast<double>(opt.windows));
    std::size_t trigger_index = 0;
    WindowHook hook = [&](FractionalStepEngine& eng, std::size_t w, const std::vector<std::uint64_t>& jumps) {
        res.log.append(make_histogram(jumps, w + 1));
        const auto& h = res.log.latest();
        if (res.triggered) {
            if (h.window == res.trigger_window + 1 && !h.quiescent)
                res.post_max = max_worker_load(res.after, h.normalized);
            return;
        }
        if (!rebalance_trigger(h, opt.cadence, opt.theta))
            return;
        res.triggered = true;
        res.trigger_window = h.window;
        trigger_index = res.log.history().size() - 1;
        res.trigger_weights = h.normalized;
        res.pre_max = max_worker_load(eng.assignment(), h.normalized);
        res.after = rebalance_assignment(h, opt.workers);
        res.after_on_trigger = max_worker_load(res.after, h.normalized);
        eng.set_assignment(res.after);
        fmt::print(log, "window {}: imbalance {:.3f} >= {}; re-balanced, max worker load {:.4f} -> {:.4f}\n",
                   h.window, *std::max_element(h.normalized.begin(), h.normalized.end()) * h.counts.size(),
                   opt.theta, res.pre_max, res.after_on_trigger);
    };
    engine.run(sigma, sched, {}, 1, hook);
    if (!res.triggered)
        fmt::print(log, "no window reached the imbalance threshold {}\n", opt.theta);
    else
        fmt::print(log, "max worker load: before {:.4f} (window {}), after {:.4f} (window {}), ratio {:.3f}\n",
                   res.pre_max, res.trigger_window, res.post_max, res.trigger_window + 1,
                   res.post_max / res.pre_max);
    (void)trigger_index;
    return res;
}

void cmd_exact(const ExactOptions& opt, std::ostream& out)
{
    out << "quantity,beta,K,h,k,value\n";
    const double bc = critical_beta(opt.K);
    out << fmt::format("critical_beta,{},{},,,{:.10g}\n", num(bc), num(opt.K), bc);
    for (double b : opt.betas)
        for (double h : opt.fields) {
            const IsingExactParams p{b, opt.K, h};
            out << fmt::format("coverage_1d,{},{},{},,{:.10g}\n", num(b), num(opt.K), num(h), exact_1d_coverage(p));
            for (int k = 0; k <= opt.k_max; ++k)
                out << fmt::format("correlation_1d,{},{},{},{},{:.10g}\n", num(b), num(opt.K), num(h), k,
                                   exact_1d_correlation(p, 0, k));
        }
    for (double b : opt.betas) {
        const auto c = exact_2d_coverage({b, opt.K, 2.0 * opt.K});
        out << fmt::format("coverage_2d,{},{},{},,{:.10g}\n", num(b), num(opt.K), num(2.0 * opt.K), c.value);
    }
}

}  // namespace fskmc
