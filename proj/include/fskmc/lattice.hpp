#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fskmc {

using Site = std::uint32_t;
using Spin = std::uint8_t;

/// Distance used for neighborhoods, closures and interaction ranges.
enum class Metric { manhattan, chebyshev };
inline constexpr Metric kLatticeMetric = Metric::manhattan;

class InvalidUpdate : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Spin values 0 .. num_states-1.
class SpinSpace {
public:
    explicit SpinSpace(int num_states);

    int num_states() const noexcept { return num_states_; }
    bool contains(int value) const noexcept { return value >= 0 && value < num_states_; }

    friend bool operator==(const SpinSpace&, const SpinSpace&) = default;

private:
    int num_states_;
};

/**
 * Periodic hypercubic lattice with row-major site numbering (the last axis
 * varies fastest).
 *
 * Nearest neighbours are tabulated at construction; balls of larger radius
 * are generated from cached offset stencils. All coordinates are wrapped.
 */
class Lattice {
public:
    explicit Lattice(std::vector<int> dims);

    int dimension() const noexcept { return static_cast<int>(dims_.size()); }
    std::size_t size() const noexcept { return size_; }
    std::span<const int> dims() const noexcept { return dims_; }
    int extent(int axis) const { return dims_.at(static_cast<std::size_t>(axis)); }

    Site site_index(std::span<const int> coords) const;
    std::vector<int> site_coords(Site x) const;
    void site_coords(Site x, std::span<int> out) const;

    /// Periodic distance in kLatticeMetric.
    int distance(Site a, Site b) const;

    /// All z != x with distance(z, x) <= r, ascending, duplicates removed.
    std::vector<Site> neighbors(Site x, int r) const;

    /// Distinct nearest neighbours (distance 1) of x, excluding x itself.
    std::span<const Site> nearest(Site x) const noexcept
    {
        return {nn_sites_.data() + nn_offsets_[x], nn_sites_.data() + nn_offsets_[x + 1]};
    }

    /// Site reached from x by an integer displacement.
    Site shift(Site x, std::span<const int> offset) const;

    /// Offsets o with metric(o) <= r, including the zero offset.
    const std::vector<std::vector<int>>& ball_offsets(int r) const;

    /// Calls f(z) for every z with distance(z, x) <= r (x included). May
    /// visit a site twice when the ball wraps around a short axis.
    template <typename F>
    void for_each_in_ball(Site x, int r, F&& f) const
    {
        if (r == 0) {
            f(x);
            return;
        }
        if (r == 1) {
            f(x);
            for (Site z : nearest(x))
                f(z);
            return;
        }
        for (const auto& o : ball_offsets(r))
            f(shift(x, o));
    }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.dims_ == b.dims_; }

private:
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 1;
    std::vector<std::uint32_t> nn_offsets_;
    std::vector<Site> nn_sites_;
    struct StencilCache {
        std::mutex mutex;
        std::map<int, std::vector<std::vector<int>>> by_radius;
    };
    std::shared_ptr<StencilCache> stencils_ = std::make_shared<StencilCache>();
};

int metric_norm(std::span<const int> offset);

/// One (site, new value) pair of an update.
struct SiteChange {
    Site site;
    Spin value;

    friend bool operator==(const SiteChange&, const SiteChange&) = default;
};

/// The local map sigma -> sigma^{x,omega}: a short list of distinct target sites
/// with their new values.
class SiteUpdate {
public:
    static constexpr std::size_t kCapacity = 4;

    SiteUpdate() = default;
    SiteUpdate(std::initializer_list<SiteChange> changes);

    void push(Site site, Spin value);
    std::span<const SiteChange> targets() const noexcept { return {changes_.data(), size_}; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    friend bool operator==(const SiteUpdate& a, const SiteUpdate& b)
    {
        return a.size_ == b.size_ && std::equal(a.changes_.begin(), a.changes_.begin() + a.size_, b.changes_.begin());
    }

private:
    std::array<SiteChange, kCapacity> changes_{};
    std::uint8_t size_ = 0;
};

/// The lattice state: one spin per site.
class Configuration {
public:
    Configuration(const Lattice& lattice, SpinSpace space, Spin fill = 0);
    Configuration(std::vector<Spin> spins, SpinSpace space);

    std::size_t size() const noexcept { return spins_.size(); }
    const SpinSpace& spin_space() const noexcept { return space_; }
    Spin operator[](Site x) const noexcept { return spins_[x]; }
    std::span<const Spin> spins() const noexcept { return spins_; }

    /// Throws InvalidUpdate when the value is outside the spin space.
    void set(Site x, Spin value);

    /// Writes every target of u. Validates all targets before writing.
    void apply(const SiteUpdate& u);

    /// The update that undoes u on the current (pre-update) state.
    SiteUpdate inverse_of(const SiteUpdate& u) const;

    friend bool operator==(const Configuration& a, const Configuration& b)
    {
        return a.space_ == b.space_ && a.spins_ == b.spins_;
    }

private:
    std::vector<Spin> spins_;
    SpinSpace space_;
};

inline void apply_update(Configuration& sigma, const SiteUpdate& u) { sigma.apply(u); }

}  // namespace fskmc
