#include "fskmc/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fskmc {

EventCatalog::EventCatalog(const Lattice& lattice, const RateModel& model, std::vector<Site> domain)
    : lattice_(&lattice),
      model_(&model),
      domain_(std::move(domain)),
      refresh_radius_(2 * model.interaction_range())
{
    std::sort(domain_.begin(), domain_.end());
    domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
    if (!domain_.empty() && domain_.back() >= lattice.size())
        throw std::out_of_range("domain contains a site outside the lattice");
    events_.resize(domain_.size());
    site_rate_.assign(domain_.size(), 0.0);
    stamp_.assign(domain_.size(), 0);
    tree_.assign(domain_.size() + 1, 0.0);
    tree_top_ = std::bit_floor(domain_.size() + 1);
}

void EventCatalog::rebuild_tree()
{
    const std::size_t n = domain_.size();
    std::fill(tree_.begin(), tree_.end(), 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        tree_[i] += site_rate_[i - 1];
        const std::size_t j = i + (i & (~i + 1));
        if (j <= n)
            tree_[j] += tree_[i];
    }
}

void EventCatalog::tree_add(std::size_t slot, double delta)
{
    for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1))
        tree_[i] += delta;
}

std::size_t EventCatalog::tree_find(double target) const
{
    std::size_t pos = 0;
    for (std::size_t step = tree_top_; step > 0; step >>= 1) {
        if (pos + step < tree_.size() && tree_[pos + step] <= target) {
            pos += step;
            target -= tree_[pos];
        }
    }
    return pos;
}

std::size_t EventCatalog::num_events() const noexcept
{
    std::size_t n = 0;
    for (const auto& v : events_)
        n += v.size();
    return n;
}

void EventCatalog::refresh_slot(const Configuration& sigma, std::size_t slot)
{
    auto& ev = events_[slot];
    ev.clear();
    model_->enumerate(*lattice_, sigma, domain_[slot], ev);
    double r = 0.0;
    for (const auto& e : ev)
        r += e.rate;
    site_rate_[slot] = r;
}

void EventCatalog::rebuild(const Configuration& sigma)
{
    for (std::size_t i = 0; i < domain_.size(); ++i)
        refresh_slot(sigma, i);
    total_ = exact_total();
    total_at_rebuild_ = total_;
    rebuild_tree();
    updates_since_rebuild_ = 0;
}

double EventCatalog::exact_total() const
{
    double t = 0.0;
    for (const auto& ev : events_)
        for (const auto& e : ev)
            t += e.rate;
    return t;
}

std::optional<std::size_t> EventCatalog::slot_of(Site x) const noexcept
{
    auto it = std::lower_bound(domain_.begin(), domain_.end(), x);
    if (it == domain_.end() || *it != x)
        return std::nullopt;
    return static_cast<std::size_t>(it - domain_.begin());
}

void EventCatalog::refresh_around(const Configuration& sigma, std::span<const SiteChange> changed)
{
    if (++generation_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        generation_ = 1;
    }
    scratch_.clear();
    for (const auto& c : changed) {
        lattice_->for_each_in_ball(c.site, refresh_radius_, [&](Site z) {
            if (auto slot = slot_of(z); slot && stamp_[*slot] != generation_) {
                stamp_[*slot] = generation_;
                scratch_.push_back(*slot);
            }
        });
    }
    for (std::size_t slot : scratch_) {
        const double before = site_rate_[slot];
        refresh_slot(sigma, slot);
        total_ += site_rate_[slot] - before;
        tree_add(slot, site_rate_[slot] - before);
    }
    // Cancellation leaves a residue when the rates drain to zero.
    if (++updates_since_rebuild_ >= kRebuildInterval || total_ <= 1e-9 * total_at_rebuild_) {
        total_ = exact_total();
        total_at_rebuild_ = total_;
        rebuild_tree();
        updates_since_rebuild_ = 0;
    }
}

std::optional<Selection> EventCatalog::sample_next(Rng& rng) const
{
    if (!(total_ > 0.0))
        return std::nullopt;
    const double tau = -std::log(rng.uniform()) / total_;

    double target = rng.uniform() * total_;
    std::size_t slot = tree_find(target);
    // Rounding can land past the last positive rate: step back to one.
    if (slot >= domain_.size())
        slot = domain_.size() - 1;
    while (site_rate_[slot] <= 0.0) {
        if (slot == 0)
            return std::nullopt;
        --slot;
    }
    double acc = 0.0;
    target = rng.uniform() * site_rate_[slot];
    const auto& ev = events_[slot];
    for (std::size_t k = 0; k < ev.size(); ++k) {
        acc += ev[k].rate;
        if (target < acc)
            return Selection{tau, slot, k};
    }
    return Selection{tau, slot, ev.size() - 1};
}

EventCatalog build_catalog(const Lattice& lattice, const Configuration& sigma, std::vector<Site> domain,
                           const RateModel& model)
{
    EventCatalog c(lattice, model, std::move(domain));
    c.rebuild(sigma);
    return c;
}

const SiteUpdate& choose_update(const Event& e, Rng& rng)
{
    if (e.num_alternatives == 1)
        return e.alternatives[0];
    return e.alternatives[rng.below(e.num_alternatives)];
}

WindowResult run_window(Configuration& sigma, EventCatalog& catalog, double dt, Rng& rng)
{
    WindowResult result;
    result.advanced_time = dt;
    if (!(dt > 0.0))
        return result;
    catalog.rebuild(sigma);
    double t = 0.0;
    for (;;) {
        auto sel = catalog.sample_next(rng);
        if (!sel || t + sel->waiting_time > dt)
            break;
        t += sel->waiting_time;
        const SiteUpdate& u = choose_update(catalog.event(*sel), rng);
        sigma.apply(u);
        catalog.refresh_around(sigma, u.targets());
        ++result.jumps;
        result.last_event_time = t;
    }
    return result;
}

WindowResult run_window(Configuration& sigma, const Lattice& lattice, std::vector<Site> domain, double dt,
                        const RateModel& model, Rng& rng)
{
    EventCatalog catalog(lattice, model, std::move(domain));
    return run_window(sigma, catalog, dt, rng);
}

std::vector<Site> all_sites(const Lattice& lattice)
{
    std::vector<Site> s(lattice.size());
    std::iota(s.begin(), s.end(), Site{0});
    return s;
}

}  // namespace fskmc
