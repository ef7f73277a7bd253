#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fskmc/balance.hpp"
#include "fskmc/config.hpp"
#include "fskmc/engine.hpp"
#include "fskmc/verification.hpp"

namespace fskmc {

/// Runs a configured simulation. Writes the results CSV
/// (run_id,time,observable,value,stderr) and, when `workload` is non-null,
/// the workload CSV. Warnings go to `log`.
RunSummary simulate(const RunConfig& cfg, std::ostream& results, std::ostream* workload, std::ostream& log);

/// simulate() with the output paths from the config.
RunSummary cmd_run(const RunConfig& cfg, std::ostream& log);

struct VerifyOptions {
    OracleSuiteOptions oracle;
    bool weak_error = false;
    std::size_t replicas = 20000;
};

/// Prints one line per check. Returns true when every check passed.
bool cmd_verify(const VerifyOptions& opt, std::ostream& out);

struct BenchmarkOptions {
    std::string model = "arrhenius";
    int dimension = 1;
    std::vector<int> sizes{4096, 8192, 16384, 32768, 65536};  ///< sites (1D) or side length (2D)
    std::vector<std::size_t> workers{1};
    int cell = 64;  ///< cell extent (1D) or strip width (2D)
    double dt = 1.0;
    double horizon = 10.0;
    std::string schedule = "lie";
    bool serial = true;
    std::uint64_t seed = 1;
};

struct BenchmarkRow {
    std::size_t size = 0;
    std::size_t workers = 0;  ///< 0 for the serial kernel
    std::string schedule;
    double dt = 0.0;
    double wall_seconds = 0.0;
    double jumps_per_second = 0.0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    double slope = 0.0;  ///< log wall time vs log N, partitioned runs with the first worker count
};

BenchmarkReport cmd_benchmark(const BenchmarkOptions& opt, std::ostream& csv, std::ostream& log);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct BalanceDemoOptions {
    int cells = 12;
    int cell_size = 1024;
    std::size_t workers = 4;
    ArrheniusParams params{1.0, 1.0, 5.0, 1.0, 1.0};
    double dt = 0.1;
    std::size_t windows = 4;
    std::size_t cadence = 1;
    double theta = 2.0;
    std::uint64_t seed = 7;
    std::size_t threads = 1;
};

struct BalanceDemoResult {
    std::vector<double> trigger_weights;  ///< normalized workload of the triggering window
    std::size_t trigger_window = 0;
    Assignment before;
    Assignment after;
    double pre_max = 0.0;   ///< max worker load of `before` on the triggering window
    double post_max = 0.0;  ///< max worker load of `after` on the next window
    double after_on_trigger = 0.0;  ///< max worker load of `after` on the triggering window
    bool triggered = false;
    WorkloadLog log;
};

/// 1D Arrhenius strip with a coverage ramp over its left half (vacant at
/// the left end, full from the middle on); rebalances the cell-to-worker map.
BalanceDemoResult cmd_balance_demo(const BalanceDemoOptions& opt, std::ostream& log);

struct ExactOptions {
    std::vector<double> betas{1.0, 2.0};
    std::vector<double> fields{0.0, 0.5, 1.0, 1.5, 2.0};
    double K = 1.0;
    int k_max = 10;
};

/// CSV quantity,beta,K,h,k,value of the exact solutions over a grid.
void cmd_exact(const ExactOptions& opt, std::ostream& out);

}  // namespace fskmc
