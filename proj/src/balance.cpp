#include "fskmc/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace fskmc {

std::uint64_t WorkloadHistogram::total() const noexcept
{
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

WorkloadHistogram make_histogram(std::vector<std::uint64_t> counts, std::size_t window)
{
    WorkloadHistogram h;
    h.window = window;
    h.counts = std::move(counts);
    const auto total = h.total();
    h.quiescent = total == 0;
    if (!h.quiescent)
        for (auto c : h.counts)
            h.normalized.push_back(static_cast<double>(c) / static_cast<double>(total));
    return h;
}

WorkloadHistogram record_workload(std::span<const WindowResult> results, std::size_t window)
{
    std::vector<std::uint64_t> counts;
    counts.reserve(results.size());
    for (const auto& r : results)
        counts.push_back(r.jumps);
    return make_histogram(std::move(counts), window);
}

void WorkloadLog::write_csv(std::ostream& out) const
{
    out << "window,cell,jumps\n";
    for (const auto& h : history_)
        for (std::size_t m = 0; m < h.counts.size(); ++m)
            out << fmt::format("{},{},{}\n", h.window, m, h.counts[m]);
}

double max_worker_load(const Assignment& a, std::span<const double> weights)
{
    double best = 0.0;
    for (const auto& g : a.groups) {
        double s = 0.0;
        for (std::size_t c : g)
            s += weights[c];
        best = std::max(best, s);
    }
    return best;
}

namespace {

void check_workers(std::size_t cells, std::size_t workers)
{
    if (workers == 0)
        throw std::invalid_argument("worker count must be positive");
    if (workers > cells)
        throw std::invalid_argument(
            fmt::format("cannot give each of {} workers a cell when there are only {} cells", workers, cells));
}

Assignment from_cuts(const std::vector<std::size_t>& cuts, std::size_t cells)
{
    // cuts[k] = number of cells in the first k+1 groups.
    Assignment a;
    std::size_t begin = 0;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
        const std::size_t end = k < cuts.size() ? cuts[k] : cells;
        std::vector<std::size_t> g(end - begin);
        std::iota(g.begin(), g.end(), begin);
        a.groups.push_back(std::move(g));
        begin = end;
    }
    return a;
}

}  // namespace

Assignment optimal_contiguous_assignment(std::span<const double> weights, std::size_t workers)
{
    const std::size_t m = weights.size();
    check_workers(m, workers);
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        prefix[i + 1] = prefix[i] + weights[i];

    constexpr double inf = std::numeric_limits<double>::infinity();
    // best[k][j]: min over splits of the first j cells into k groups of the max load.
    std::vector<std::vector<double>> best(workers + 1, std::vector<double>(m + 1, inf));
    std::vector<std::vector<std::size_t>> arg(workers + 1, std::vector<std::size_t>(m + 1, 0));
    best[0][0] = 0.0;
    for (std::size_t k = 1; k <= workers; ++k)
        for (std::size_t j = k; j <= m; ++j)
            for (std::size_t i = k - 1; i < j; ++i) {
                const double v = std::max(best[k - 1][i], prefix[j] - prefix[i]);
                if (v < best[k][j]) {
                    best[k][j] = v;
                    arg[k][j] = i;
                }
            }
    std::vector<std::size_t> cuts(workers - 1);
    std::size_t j = m;
    for (std::size_t k = workers; k > 1; --k) {
        j = arg[k][j];
        cuts[k - 2] = j;
    }
    return from_cuts(cuts, m);
}

Assignment rebalance_assignment(std::span<const double> weights, std::size_t workers)
{
    const std::size_t m = weights.size();
    check_workers(m, workers);
    std::vector<double> cdf(m);
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    const double total = m ? cdf.back() : 0.0;
    if (!(total > 0.0))
        return equal_count_assignment(m, workers);

    std::vector<std::size_t> cuts;
    std::size_t prev = 0;
    for (std::size_t k = 1; k < workers; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(workers);
        // Boundary after cell j (1-based count j), keeping room for the rest.
        std::size_t best_j = prev + 1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = prev + 1; j <= m - (workers - k); ++j) {
            const double d = std::abs(cdf[j - 1] - target);
            if (d < best_d) {
                best_d = d;
                best_j = j;
            }
        }
        cuts.push_back(best_j);
        prev = best_j;
    }
    Assignment greedy = from_cuts(cuts, m);
    Assignment optimum = optimal_contiguous_assignment(weights, workers);
    if (max_worker_load(greedy, weights) > max_worker_load(optimum, weights) + 1e-12 * total)
        return optimum;
    return greedy;
}

Assignment rebalance_assignment(const WorkloadHistogram& w, std::size_t workers)
{
    if (w.quiescent)
        return equal_count_assignment(w.counts.size(), workers);
    return rebalance_assignment(std::span<const double>(w.normalized), workers);
}

namespace {

void check_strips(std::span<const double> weights, std::span<const int> boundaries, int extent)
{
    if (weights.size() != boundaries.size())
        throw std::invalid_argument(fmt::format("{} workload entries for {} strips", weights.size(), boundaries.size()));
    if (boundaries.empty() || boundaries.front() != 0)
        throw std::invalid_argument("strip boundaries must start at 0");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (boundaries[i] <= boundaries[i - 1])
            throw std::invalid_argument("strip boundaries must increase");
    if (boundaries.back() >= extent)
        throw std::invalid_argument("last strip boundary lies outside the lattice");
}

int strip_end(std::span<const int> b, std::size_t i, int extent)
{
    return i + 1 < b.size() ? b[i + 1] : extent;
}

// Cumulative workload up to position x (sites [0, x)).
double cdf_at(std::span<const double> weights, std::span<const int> b, int extent, double x)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double lo = b[i];
        const double hi = strip_end(b, i, extent);
        if (x >= hi) {
            acc += weights[i];
            continue;
        }
        if (x > lo)
            acc += weights[i] * (x - lo) / (hi - lo);
        break;
    }
    return acc;
}

}  // namespace

std::vector<double> remap_workload(std::span<const double> weights, std::span<const int> from, std::span<const int> to,
                                   int extent)
{
    check_strips(weights, from, extent);
    std::vector<double> out;
    for (std::size_t j = 0; j < to.size(); ++j)
        out.push_back(cdf_at(weights, from, extent, strip_end(to, j, extent)) - cdf_at(weights, from, extent, to[j]));
    return out;
}

StripRebalance rebalance_cells_1d(std::span<const double> weights, std::span<const int> boundaries, int extent,
                                  int granularity, int min_extent, std::size_t new_count)
{
    check_strips(weights, boundaries, extent);
    if (granularity < 1)
        throw std::invalid_argument("granularity must be at least 1");
    const std::size_t count = new_count ? new_count : boundaries.size();
    StripRebalance out;
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) {
        out.warning = "quiescent workload; strips kept";
        return out;
    }
    if (static_cast<long long>(count) * min_extent > extent) {
        out.warning = fmt::format("{} strips of at least {} sites do not fit in {} sites; strips kept", count,
                                  min_extent, extent);
        return out;
    }

    std::vector<int> b(count, 0);
    for (std::size_t k = 1; k < count; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(count);
        // Leftmost position where the piecewise-linear CDF reaches the target.
        double x = extent;
        for (std::size_t i = 0; i < boundaries.size(); ++i) {
            const double lo = boundaries[i];
            const double hi = strip_end(boundaries, i, extent);
            const double before = cdf_at(weights, boundaries, extent, lo);
            if (before + weights[i] >= target - 1e-12 * total && weights[i] > 0.0) {
                x = lo + (hi - lo) * std::clamp((target - before) / weights[i], 0.0, 1.0);
                break;
            }
        }
        b[k] = static_cast<int>(std::lround(x / granularity)) * granularity;
    }
    for (std::size_t k = 1; k < count; ++k)
        b[k] = std::max(b[k], b[k - 1] + min_extent);
    int next = extent;
    for (std::size_t k = count; k-- > 1;) {
        b[k] = std::min(b[k], next - min_extent);
        next = b[k];
    }
    for (std::size_t k = 1; k < count; ++k)
        if (b[k] - b[k - 1] < min_extent) {
            out.warning = "minimum strip extents cannot be met; strips kept";
            return out;
        }
    out.boundaries = std::move(b);
    return out;
}

bool rebalance_trigger(const WorkloadHistogram& latest, std::size_t cadence, double theta)
{
    if (theta < 1.0)
        throw std::invalid_argument(fmt::format("imbalance threshold {} is below 1", theta));
    if (cadence == 0 || latest.window % cadence != 0 || latest.quiescent)
        return false;
    const double peak = *std::max_element(latest.normalized.begin(), latest.normalized.end());
    return peak * static_cast<double>(latest.counts.size()) >= theta;
}

bool rebalance_trigger(const WorkloadLog& log, std::size_t cadence, double theta)
{
    return !log.empty() && rebalance_trigger(log.latest(), cadence, theta);
}

}  // namespace fskmc
