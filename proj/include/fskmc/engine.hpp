#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <tbb/task_arena.h>

#include "fskmc/kernel.hpp"
#include "fskmc/models.hpp"
#include "fskmc/partition.hpp"
#include "fskmc/random.hpp"
#include "fskmc/schedule.hpp"

namespace fskmc {

/// Contiguous groups of cells (in cell-id order) per worker.
struct Assignment {
    std::vector<std::vector<std::size_t>> groups;

    std::size_t num_workers() const noexcept { return groups.size(); }
    /// Worker owning each cell.
    std::vector<std::size_t> owner_map(std::size_t num_cells) const;
};

/// Equal cell counts per worker (the first num_cells % P workers get one more).
Assignment equal_count_assignment(std::size_t num_cells, std::size_t workers);

/// Called at the end of every macro-window with the per-cell jump counts of
/// that window. It may change the engine's assignment or partition.
class FractionalStepEngine;
using WindowHook = std::function<void(FractionalStepEngine&, std::size_t window, const std::vector<std::uint64_t>& jumps)>;

/// Observer: physical time, macro-window count completed, configuration.
using Observer = std::function<void(double time, std::size_t windows_done, const Configuration& sigma)>;

struct RunSummary {
    std::uint64_t jumps = 0;
    double physical_time = 0.0;
    std::size_t windows = 0;
};

/**
 * Parallel fractional-step executor.
 *
 * A sub-step advances every cell of one color for the same duration, each
 * cell on its own SSA kernel and random stream, then waits for all of them.
 * Streams are keyed by (cell, window, sub-step), so results do not depend on
 * the worker count or on which worker ran a cell.
 */
class FractionalStepEngine {
public:
    FractionalStepEngine(Partition partition, const RateModel& model, SeedPolicy seeds, std::size_t workers = 1);
    ~FractionalStepEngine();

    FractionalStepEngine(const FractionalStepEngine&) = delete;
    FractionalStepEngine& operator=(const FractionalStepEngine&) = delete;

    const Partition& partition() const noexcept { return partition_; }
    const RateModel& model() const noexcept { return *model_; }
    std::size_t workers() const noexcept { return workers_; }
    const Assignment& assignment() const noexcept { return assignment_; }
    const SeedPolicy& seeds() const noexcept { return seeds_; }
    void set_seeds(SeedPolicy s) noexcept { seeds_ = s; }

    /// Replaces the cell-to-worker map. Every cell must appear exactly once.
    void set_assignment(Assignment a);

    /// Replaces the partition (same lattice); resets to equal-count assignment.
    void set_partition(Partition p);

    /// Splits each cell into an inner checkerboard; outer sub-steps then run
    /// an inner Lie schedule with window inner_dt over the inner tiles.
    void enable_nesting(const std::vector<int>& inner_extent, double inner_dt);
    bool nested() const noexcept { return nested_ != nullptr; }

    /// Advances all cells of `group` by `duration`. Returns per-cell results
    /// indexed by cell id (cells of the other color report zero jumps).
    std::vector<WindowResult> execute_substep(Configuration& sigma, Color group, double duration, std::size_t window,
                                              std::size_t substep);

    /// Runs a whole schedule. The observer is called at time 0 and after
    /// every `stride` macro-windows (and after the last one).
    RunSummary run(Configuration& sigma, const Schedule& schedule, const Observer& observer = {},
                   std::size_t stride = 1, const WindowHook& hook = {});

private:
    WindowResult run_cell(Configuration& sigma, std::size_t cell, double duration, std::size_t window,
                          std::size_t substep);
    void reset_workspaces();

    Partition partition_;
    const RateModel* model_;
    SeedPolicy seeds_;
    std::size_t workers_;
    Assignment assignment_;
    std::vector<std::unique_ptr<EventCatalog>> catalogs_;
    std::unique_ptr<NestedPartition> nested_;
    std::vector<std::vector<std::unique_ptr<EventCatalog>>> inner_catalogs_;
    double inner_dt_ = 0.0;
    std::unique_ptr<tbb::task_arena> arena_;
};

/// Whole-lattice serial SSA for physical time T in windows of `dt` (the
/// window split is exact by memorylessness). Observer after each window.
RunSummary run_serial(Configuration& sigma, const Lattice& lattice, const RateModel& model, double horizon,
                      double dt, const SeedPolicy& seeds, const Observer& observer = {});

}  // namespace fskmc
