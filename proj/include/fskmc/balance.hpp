#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fskmc/engine.hpp"
#include "fskmc/kernel.hpp"

namespace fskmc {

/// Jump counts per cell during one window.
struct WorkloadHistogram {
    std::size_t window = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> normalized;  ///< empty when quiescent
    bool quiescent = true;

    std::uint64_t total() const noexcept;
};

WorkloadHistogram make_histogram(std::vector<std::uint64_t> counts, std::size_t window);
WorkloadHistogram record_workload(std::span<const WindowResult> results, std::size_t window);

/// Rolling log of histograms; CSV columns window,cell,jumps.
class WorkloadLog {
public:
    void append(WorkloadHistogram h) { history_.push_back(std::move(h)); }
    const std::vector<WorkloadHistogram>& history() const noexcept { return history_; }
    bool empty() const noexcept { return history_.empty(); }
    const WorkloadHistogram& latest() const { return history_.back(); }

    void write_csv(std::ostream& out) const;

private:
    std::vector<WorkloadHistogram> history_;
};

/// Largest summed weight over the workers of an assignment.
double max_worker_load(const Assignment& a, std::span<const double> weights);

/// Exact min-max contiguous split into P non-empty groups (dynamic program).
Assignment optimal_contiguous_assignment(std::span<const double> weights, std::size_t workers);

/**
 * Contiguous cell groups matching the workload CDF to multiples of 1/P.
 *
 * The k-th boundary goes after the cell whose cumulative mass is nearest to
 * k/P (ties to the earlier cell), leaving at least one cell per worker. If
 * that greedy split is worse than the exact contiguous optimum, the optimum
 * is returned. A quiescent histogram gives the equal-count split.
 */
Assignment rebalance_assignment(const WorkloadHistogram& w, std::size_t workers);
Assignment rebalance_assignment(std::span<const double> weights, std::size_t workers);

struct StripRebalance {
    std::optional<std::vector<int>> boundaries;  ///< nullopt: keep the old strips
    std::string warning;
};

/**
 * New strip starts along axis 0 so that each of `new_count` strips carries
 * about equal workload. The workload of a strip is spread uniformly over its
 * sites; boundaries sit at the inverse CDF of k/new_count rounded to a
 * multiple of `granularity`, then are pushed apart to at least `min_extent`.
 */
StripRebalance rebalance_cells_1d(std::span<const double> weights, std::span<const int> boundaries, int extent,
                                  int granularity, int min_extent, std::size_t new_count = 0);

/// Re-bins a per-strip workload onto other strips through the site density.
std::vector<double> remap_workload(std::span<const double> weights, std::span<const int> from, std::span<const int> to,
                                   int extent);

/// True iff window % cadence == 0 and max(normalized) * M >= theta.
bool rebalance_trigger(const WorkloadHistogram& latest, std::size_t cadence, double theta);
bool rebalance_trigger(const WorkloadLog& log, std::size_t cadence, double theta);

}  // namespace fskmc
