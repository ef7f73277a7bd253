#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fskmc/commands.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;

// Writes to `path`, or stdout when it is empty or "-".
template <class F>
void with_output(const std::string& path, F&& f)
{
    if (path.empty() || path == "-") {
        f(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw fskmc::ConfigError(fmt::format("cannot write '{}'", path));
    f(out);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fractional-step parallel lattice kinetic Monte Carlo"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a simulation from an INI config");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> output, workload, schedule;
    std::optional<double> dt, horizon;
    run->add_option("-c,--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "master seed");
    run->add_option("--workers", workers, "worker threads");
    run->add_option("-o,--output", output, "results CSV path");
    run->add_option("--workload", workload, "workload CSV path");
    run->add_option("--schedule", schedule, "lie | strang | random");
    run->add_option("--dt", dt, "window length");
    run->add_option("--time", horizon, "time horizon");

    // verify
    auto* verify = app.add_subcommand("verify", "exact generator checks on small lattices");
    fskmc::VerifyOptions vopt;
    verify->add_flag("--weak-error", vopt.weak_error, "also estimate the weak error order by sampling");
    verify->add_option("--replicas", vopt.replicas, "replicas per dt for --weak-error")->check(CLI::PositiveNumber);
    verify->add_option("--sites", vopt.oracle.num_sites, "oracle lattice size")->check(CLI::Range(2, 12));
    verify->add_option("--cell", vopt.oracle.cell_size, "oracle cell size")->check(CLI::PositiveNumber);
    verify->add_option("--beta", vopt.oracle.params.beta, "inverse temperature");
    verify->add_option("--K", vopt.oracle.params.K, "coupling");
    verify->add_option("--field", vopt.oracle.params.h, "field (rate convention)");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "wall time and throughput against lattice size");
    fskmc::BenchmarkOptions bopt;
    std::string bench_out = "-";
    bool no_serial = false;
    bench->add_option("--model", bopt.model, "arrhenius | zgb");
    bench->add_option("--dim", bopt.dimension, "1 or 2")->check(CLI::Range(1, 2));
    bench->add_option("--sizes", bopt.sizes, "sites (1D) or side lengths (2D)")->delimiter(',');
    bench->add_option("--workers", bopt.workers, "worker counts")->delimiter(',');
    bench->add_option("--cell", bopt.cell, "cell extent along axis 0")->check(CLI::PositiveNumber);
    bench->add_option("--dt", bopt.dt, "window length")->check(CLI::PositiveNumber);
    bench->add_option("--time", bopt.horizon, "time horizon")->check(CLI::PositiveNumber);
    bench->add_option("--schedule", bopt.schedule, "lie | strang | random");
    bench->add_option("--seed", bopt.seed, "master seed");
    bench->add_flag("--no-serial", no_serial, "skip the serial reference kernel");
    bench->add_option("-o,--output", bench_out, "CSV path (default stdout)");

    // balance-demo
    auto* demo = app.add_subcommand("balance-demo", "workload re-balancing on a coverage ramp");
    fskmc::BalanceDemoOptions dopt;
    std::string demo_workload;
    demo->add_option("--workers", dopt.workers, "logical workers")->check(CLI::PositiveNumber);
    demo->add_option("--threads", dopt.threads, "threads")->check(CLI::PositiveNumber);
    demo->add_option("--cells", dopt.cells, "cells")->check(CLI::PositiveNumber);
    demo->add_option("--theta", dopt.theta, "imbalance threshold");
    demo->add_option("--seed", dopt.seed, "seed");
    demo->add_option("--workload", demo_workload, "workload CSV path");

    // exact
    auto* exact = app.add_subcommand("exact", "exact Ising coverage and correlations");
    fskmc::ExactOptions eopt;
    std::string exact_out = "-";
    exact->add_option("--beta", eopt.betas, "inverse temperatures")->delimiter(',');
    exact->add_option("--field", eopt.fields, "fields (exact convention)")->delimiter(',');
    exact->add_option("--K", eopt.K, "coupling");
    exact->add_option("--kmax", eopt.k_max, "largest distance")->check(CLI::NonNegativeNumber);
    exact->add_option("-o,--output", exact_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            fskmc::RunConfig cfg = fskmc::load_config(config_path);
            if (seed)
                cfg.seed = *seed;
            if (workers)
                cfg.workers = *workers;
            if (output)
                cfg.results_path = *output;
            if (workload)
                cfg.workload_path = *workload;
            if (schedule)
                cfg.schedule = fskmc::parse_schedule_kind(*schedule);
            if (dt)
                cfg.dt = *dt;
            if (horizon)
                cfg.horizon = *horizon;
            fskmc::validate_config(cfg);
            const auto s = fskmc::cmd_run(cfg, std::cerr);
            fmt::print(stderr, "{} jumps over {} windows, t = {:.6g}; results in {}\n", s.jumps, s.windows,
                       s.physical_time, cfg.results_path);
            return kOk;
        }
        if (*verify) {
            vopt.oracle.params.validate();
            return fskmc::cmd_verify(vopt, std::cout) ? kOk : kVerifyFailed;
        }
        if (*bench) {
            bopt.serial = !no_serial;
            with_output(bench_out, [&](std::ostream& os) { fskmc::cmd_benchmark(bopt, os, std::cerr); });
            return kOk;
        }
        if (*demo) {
            const auto r = fskmc::cmd_balance_demo(dopt, std::cout);
            if (!demo_workload.empty())
                with_output(demo_workload, [&](std::ostream& os) { r.log.write_csv(os); });
            return kOk;
        }
        if (*exact) {
            with_output(exact_out, [&](std::ostream& os) { fskmc::cmd_exact(eopt, os); });
            return kOk;
        }
    } catch (const fskmc::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    }
    return kUsage;
}
