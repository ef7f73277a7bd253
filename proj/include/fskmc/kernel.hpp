#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fskmc/lattice.hpp"
#include "fskmc/models.hpp"
#include "fskmc/random.hpp"

namespace fskmc {

/// Outcome of one bounded-time kernel run on a domain.
struct WindowResult {
    std::uint64_t jumps = 0;
    double advanced_time = 0.0;    ///< the window length
    double last_event_time = 0.0;  ///< local clock of the last executed event
};

/// Result of one SSA draw from a catalog.
struct Selection {
    double waiting_time;
    std::size_t slot;   ///< position of the anchor in the domain
    std::size_t event;  ///< index within that anchor's events
};

/**
 * Events anchored in a fixed site domain together with their total rate.
 *
 * Rates may read sites outside the domain (the closure). After an event
 * fires, only anchors within 2L of a changed site are re-enumerated; the
 * running total is recomputed exactly every kRebuildInterval updates.
 */
class EventCatalog {
public:
    static constexpr std::uint64_t kRebuildInterval = 10000;

    EventCatalog(const Lattice& lattice, const RateModel& model, std::vector<Site> domain);

    void rebuild(const Configuration& sigma);

    /// Re-enumerates domain anchors within 2L of any changed site.
    void refresh_around(const Configuration& sigma, std::span<const SiteChange> changed);

    double total_rate() const noexcept { return total_; }
    std::size_t num_events() const noexcept;
    std::span<const Site> domain() const noexcept { return domain_; }
    std::span<const Event> events_at(std::size_t slot) const noexcept { return events_[slot]; }
    double rate_at(std::size_t slot) const noexcept { return site_rate_[slot]; }

    /// Sum of all event rates, recomputed from scratch.
    double exact_total() const;

    /// Exponential waiting time and a rate-proportional event; nullopt when
    /// the total rate is zero.
    std::optional<Selection> sample_next(Rng& rng) const;

    const Event& event(const Selection& s) const noexcept { return events_[s.slot][s.event]; }

    /// Position of a site in the domain, or nullopt.
    std::optional<std::size_t> slot_of(Site x) const noexcept;

private:
    void refresh_slot(const Configuration& sigma, std::size_t slot);
    void rebuild_tree();
    void tree_add(std::size_t slot, double delta);
    /// Slot whose cumulative rate interval contains target.
    std::size_t tree_find(double target) const;

    const Lattice* lattice_;
    const RateModel* model_;
    std::vector<Site> domain_;
    std::vector<std::vector<Event>> events_;
    std::vector<double> site_rate_;
    std::vector<double> tree_;  // Fenwick sums of site_rate_
    std::size_t tree_top_ = 0;
    double total_ = 0.0;
    double total_at_rebuild_ = 0.0;
    std::uint64_t updates_since_rebuild_ = 0;
    int refresh_radius_;
    std::vector<std::size_t> scratch_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t generation_ = 0;
};

EventCatalog build_catalog(const Lattice& lattice, const Configuration& sigma, std::vector<Site> domain,
                           const RateModel& model);

inline std::optional<Selection> sample_next(const EventCatalog& catalog, Rng& rng) { return catalog.sample_next(rng); }

/// Picks the update of a fired event (uniform over its alternatives).
const SiteUpdate& choose_update(const Event& e, Rng& rng);

/**
 * Runs the SSA on a domain for local time dt using an existing catalog.
 * The event whose clock would pass dt is discarded; the next window starts
 * with a fresh exponential clock.
 */
WindowResult run_window(Configuration& sigma, EventCatalog& catalog, double dt, Rng& rng);

WindowResult run_window(Configuration& sigma, const Lattice& lattice, std::vector<Site> domain, double dt,
                        const RateModel& model, Rng& rng);

std::vector<Site> all_sites(const Lattice& lattice);

}  // namespace fskmc
