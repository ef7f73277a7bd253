#include "fskmc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

namespace fskmc {

std::vector<std::size_t> Assignment::owner_map(std::size_t num_cells) const
{
    std::vector<std::size_t> owner(num_cells, static_cast<std::size_t>(-1));
    for (std::size_t w = 0; w < groups.size(); ++w)
        for (std::size_t c : groups[w]) {
            if (c >= num_cells)
                throw std::out_of_range("assignment names cell " + std::to_string(c) + " of " +
                                        std::to_string(num_cells));
            if (owner[c] != static_cast<std::size_t>(-1))
                throw std::invalid_argument("cell " + std::to_string(c) + " is assigned twice");
            owner[c] = w;
        }
    for (std::size_t c = 0; c < num_cells; ++c)
        if (owner[c] == static_cast<std::size_t>(-1))
            throw std::invalid_argument("cell " + std::to_string(c) + " is not assigned");
    return owner;
}

Assignment equal_count_assignment(std::size_t num_cells, std::size_t workers)
{
    if (workers == 0)
        throw std::invalid_argument("worker count must be positive");
    workers = std::min(workers, std::max<std::size_t>(num_cells, 1));
    Assignment a;
    a.groups.resize(workers);
    const std::size_t base = num_cells / workers;
    const std::size_t extra = num_cells % workers;
    std::size_t c = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t n = base + (w < extra ? 1 : 0);
        for (std::size_t k = 0; k < n; ++k)
            a.groups[w].push_back(c++);
    }
    return a;
}

FractionalStepEngine::FractionalStepEngine(Partition partition, const RateModel& model, SeedPolicy seeds,
                                           std::size_t workers)
    : partition_(std::move(partition)), model_(&model), seeds_(seeds), workers_(std::max<std::size_t>(workers, 1))
{
    if (model.interaction_range() > partition_.interaction_range() ||
        model.update_range() > partition_.update_radius())
        throw PartitionError("partition was built for a smaller interaction or update range than the model's");
    arena_ = std::make_unique<tbb::task_arena>(static_cast<int>(workers_));
    reset_workspaces();
}

FractionalStepEngine::~FractionalStepEngine() = default;

void FractionalStepEngine::reset_workspaces()
{
    const Lattice& lat = partition_.lattice();
    catalogs_.clear();
    for (const auto& c : partition_.cells())
        catalogs_.push_back(std::make_unique<EventCatalog>(lat, *model_, c.sites));
    assignment_ = equal_count_assignment(partition_.num_cells(), workers_);
    inner_catalogs_.clear();
    if (nested_) {
        for (std::size_t m = 0; m < partition_.num_cells(); ++m) {
            std::vector<std::unique_ptr<EventCatalog>> v;
            for (const auto& t : nested_->inner(m))
                v.push_back(std::make_unique<EventCatalog>(lat, *model_, t.sites));
            inner_catalogs_.push_back(std::move(v));
        }
    }
}

void FractionalStepEngine::set_assignment(Assignment a)
{
    a.owner_map(partition_.num_cells());
    assignment_ = std::move(a);
}

void FractionalStepEngine::set_partition(Partition p)
{
    if (!std::ranges::equal(p.lattice().dims(), partition_.lattice().dims()))
        throw PartitionError("replacement partition is for a different lattice");
    if (nested_)
        throw PartitionError("cannot repartition a nested engine");
    partition_ = std::move(p);
    reset_workspaces();
}

void FractionalStepEngine::enable_nesting(const std::vector<int>& inner_extent, double inner_dt)
{
    if (!(inner_dt > 0.0))
        throw std::invalid_argument("inner window length must be positive");
    nested_ = std::make_unique<NestedPartition>(partition_, inner_extent);
    inner_dt_ = inner_dt;
    reset_workspaces();
}

WindowResult FractionalStepEngine::run_cell(Configuration& sigma, std::size_t cell, double duration,
                                            std::size_t window, std::size_t substep)
{
    if (!nested_) {
        Rng rng = seeds_.stream(cell, window, substep);
        return run_window(sigma, *catalogs_[cell], duration, rng);
    }

    // Inner Lie schedule over the cell's inner checkerboard.
    WindowResult total;
    total.advanced_time = duration;
    if (!(duration > 0.0))
        return total;
    const auto& tiles = nested_->inner(cell);
    const auto n = static_cast<std::size_t>(std::ceil(duration / inner_dt_ - 1e-9));
    for (std::size_t k = 0; k < n; ++k) {
        const double h = k + 1 == n ? duration - static_cast<double>(n - 1) * inner_dt_ : inner_dt_;
        for (int phase = 0; phase < 2; ++phase) {
            const Color c = phase == 0 ? Color::O : Color::E;
            const auto& ids = nested_->inner_of(cell, c);
            std::vector<std::uint64_t> jumps(ids.size(), 0);
            tbb::parallel_for(std::size_t{0}, ids.size(), [&](std::size_t i) {
                const std::size_t t = ids[i];
                const std::uint64_t key = 1 + (k * 2 + static_cast<std::size_t>(phase)) * tiles.size() + t;
                Rng rng = seeds_.stream(cell, window, substep, key);
                jumps[i] = run_window(sigma, *inner_catalogs_[cell][t], h, rng).jumps;
            });
            for (auto j : jumps)
                total.jumps += j;
        }
    }
    return total;
}

std::vector<WindowResult> FractionalStepEngine::execute_substep(Configuration& sigma, Color group, double duration,
                                                                std::size_t window, std::size_t substep)
{
    if (sigma.size() != partition_.lattice().size())
        throw std::invalid_argument("configuration size does not match the partition's lattice");
    std::vector<WindowResult> results(partition_.num_cells());
    if (!(duration > 0.0))
        return results;

    const auto& cells = partition_.cells();
    auto work = [&](std::size_t w) {
        for (std::size_t m : assignment_.groups[w])
            if (cells[m].color == group)
                results[m] = run_cell(sigma, m, duration, window, substep);
    };
    if (workers_ == 1 && !nested_) {
        for (std::size_t w = 0; w < assignment_.num_workers(); ++w)
            work(w);
    } else {
        arena_->execute([&] {
            tbb::parallel_for(tbb::blocked_range<std::size_t>(0, assignment_.num_workers(), 1),
                              [&](const tbb::blocked_range<std::size_t>& r) {
                                  for (std::size_t w = r.begin(); w != r.end(); ++w)
                                      work(w);
                              },
                              tbb::simple_partitioner());
        });
    }
    return results;
}

RunSummary FractionalStepEngine::run(Configuration& sigma, const Schedule& schedule, const Observer& observer,
                                     std::size_t stride, const WindowHook& hook)
{
    stride = std::max<std::size_t>(stride, 1);
    RunSummary summary;
    if (observer)
        observer(0.0, 0, sigma);

    std::size_t i = 0;
    std::size_t substep = 0;
    for (std::size_t w = 0; w < schedule.num_windows; ++w) {
        std::vector<std::uint64_t> jumps(partition_.num_cells(), 0);
        for (; i < schedule.steps.size() && schedule.steps[i].window == w; ++i, ++substep) {
            const auto& s = schedule.steps[i];
            auto res = execute_substep(sigma, s.group, s.duration, w, substep);
            for (std::size_t m = 0; m < res.size(); ++m) {
                jumps[m] += res[m].jumps;
                summary.jumps += res[m].jumps;
            }
        }
        summary.windows = w + 1;
        summary.physical_time = schedule.window_end_time[w];
        if (hook)
            hook(*this, w, jumps);
        if (observer && ((w + 1) % stride == 0 || w + 1 == schedule.num_windows))
            observer(summary.physical_time, w + 1, sigma);
    }
    return summary;
}

RunSummary run_serial(Configuration& sigma, const Lattice& lattice, const RateModel& model, double horizon, double dt,
                      const SeedPolicy& seeds, const Observer& observer)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("serial window length must be positive");
    RunSummary summary;
    if (observer)
        observer(0.0, 0, sigma);
    EventCatalog catalog(lattice, model, all_sites(lattice));
    const auto n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    double t = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
        const double h = w + 1 == n ? horizon - static_cast<double>(n - 1) * dt : dt;
        // A cell id no partition uses keeps serial streams distinct.
        Rng rng = seeds.stream(~std::uint64_t{0}, w, 0);
        summary.jumps += run_window(sigma, catalog, h, rng).jumps;
        t += h;
        summary.windows = w + 1;
        summary.physical_time = t;
        if (observer)
            observer(t, w + 1, sigma);
    }
    return summary;
}

}  // namespace fskmc
