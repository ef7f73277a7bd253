#include "fskmc/lattice.hpp"

#include <cstdlib>
#include <string>

namespace fskmc {

namespace {

int wrap(int value, int extent)
{
    int r = value % extent;
    return r < 0 ? r + extent : r;
}

// Shortest periodic displacement along one axis.
int periodic_delta(int a, int b, int extent)
{
    int d = std::abs(a - b) % extent;
    return std::min(d, extent - d);
}

}  // namespace

SpinSpace::SpinSpace(int num_states) : num_states_(num_states)
{
    if (num_states < 2 || num_states > 256)
        throw std::invalid_argument("spin space needs between 2 and 256 states, got " + std::to_string(num_states));
}

int metric_norm(std::span<const int> offset)
{
    int n = 0;
    for (int o : offset) {
        if constexpr (kLatticeMetric == Metric::manhattan)
            n += std::abs(o);
        else
            n = std::max(n, std::abs(o));
    }
    return n;
}

Lattice::Lattice(std::vector<int> dims) : dims_(std::move(dims))
{
    if (dims_.empty())
        throw std::invalid_argument("lattice needs at least one axis");
    for (int e : dims_) {
        if (e < 1)
            throw std::invalid_argument("lattice extents must be positive");
        size_ *= static_cast<std::size_t>(e);
    }
    if (size_ > std::size_t{1} << 31)
        throw std::invalid_argument("lattice too large");

    strides_.assign(dims_.size(), 1);
    for (int a = dimension() - 2; a >= 0; --a)
        strides_[static_cast<std::size_t>(a)] = strides_[static_cast<std::size_t>(a) + 1] * static_cast<std::size_t>(dims_[static_cast<std::size_t>(a) + 1]);

    nn_offsets_.reserve(size_ + 1);
    nn_offsets_.push_back(0);
    std::vector<int> c(dims_.size());
    std::vector<Site> buf;
    for (std::size_t x = 0; x < size_; ++x) {
        site_coords(static_cast<Site>(x), c);
        buf.clear();
        for (std::size_t a = 0; a < dims_.size(); ++a) {
            for (int step : {-1, 1}) {
                int saved = c[a];
                c[a] = wrap(c[a] + step, dims_[a]);
                Site z = site_index(c);
                c[a] = saved;
                if (z != x && std::find(buf.begin(), buf.end(), z) == buf.end())
                    buf.push_back(z);
            }
        }
        std::sort(buf.begin(), buf.end());
        nn_sites_.insert(nn_sites_.end(), buf.begin(), buf.end());
        nn_offsets_.push_back(static_cast<std::uint32_t>(nn_sites_.size()));
    }
}

Site Lattice::site_index(std::span<const int> coords) const
{
    if (coords.size() != dims_.size())
        throw std::invalid_argument("coordinate vector has wrong dimension");
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a)
        idx += static_cast<std::size_t>(wrap(coords[a], dims_[a])) * strides_[a];
    return static_cast<Site>(idx);
}

void Lattice::site_coords(Site x, std::span<int> out) const
{
    std::size_t rest = x;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        out[a] = static_cast<int>(rest / strides_[a]);
        rest %= strides_[a];
    }
}

std::vector<int> Lattice::site_coords(Site x) const
{
    std::vector<int> c(dims_.size());
    site_coords(x, c);
    return c;
}

int Lattice::distance(Site a, Site b) const
{
    auto ca = site_coords(a);
    auto cb = site_coords(b);
    std::vector<int> delta(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i)
        delta[i] = periodic_delta(ca[i], cb[i], dims_[i]);
    return metric_norm(delta);
}

Site Lattice::shift(Site x, std::span<const int> offset) const
{
    std::size_t rest = x;
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        int c = static_cast<int>(rest / strides_[a]);
        rest %= strides_[a];
        idx += static_cast<std::size_t>(wrap(c + offset[a], dims_[a])) * strides_[a];
    }
    return static_cast<Site>(idx);
}

const std::vector<std::vector<int>>& Lattice::ball_offsets(int r) const
{
    if (r < 0)
        throw std::invalid_argument("ball radius must be nonnegative");
    std::lock_guard lock(stencils_->mutex);
    auto it = stencils_->by_radius.find(r);
    if (it != stencils_->by_radius.end())
        return it->second;

    std::vector<std::vector<int>> offsets;
    std::vector<int> o(dims_.size(), -r);
    for (;;) {
        if (metric_norm(o) <= r)
            offsets.push_back(o);
        std::size_t a = 0;
        while (a < o.size() && o[a] == r) {
            o[a] = -r;
            ++a;
        }
        if (a == o.size())
            break;
        ++o[a];
    }
    std::stable_sort(offsets.begin(), offsets.end(),
                     [](const auto& p, const auto& q) { return metric_norm(p) < metric_norm(q); });
    return stencils_->by_radius.emplace(r, std::move(offsets)).first->second;
}

std::vector<Site> Lattice::neighbors(Site x, int r) const
{
    if (r < 0)
        throw std::invalid_argument("neighbourhood radius must be nonnegative");
    std::vector<Site> out;
    if (r == 0)
        return out;
    for (const auto& o : ball_offsets(r)) {
        Site z = shift(x, o);
        if (z != x)
            out.push_back(z);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SiteUpdate::SiteUpdate(std::initializer_list<SiteChange> changes)
{
    for (const auto& c : changes)
        push(c.site, c.value);
}

void SiteUpdate::push(Site site, Spin value)
{
    if (size_ == kCapacity)
        throw InvalidUpdate("site update exceeds " + std::to_string(kCapacity) + " targets");
    for (std::size_t i = 0; i < size_; ++i)
        if (changes_[i].site == site)
            throw InvalidUpdate("site update targets site " + std::to_string(site) + " twice");
    changes_[size_++] = {site, value};
}

Configuration::Configuration(const Lattice& lattice, SpinSpace space, Spin fill)
    : spins_(lattice.size(), fill), space_(space)
{
    if (!space_.contains(fill))
        throw InvalidUpdate("fill value outside spin space");
}

Configuration::Configuration(std::vector<Spin> spins, SpinSpace space) : spins_(std::move(spins)), space_(space)
{
    for (Spin s : spins_)
        if (!space_.contains(s))
            throw InvalidUpdate("spin value " + std::to_string(s) + " outside spin space");
}

void Configuration::set(Site x, Spin value)
{
    if (x >= spins_.size())
        throw InvalidUpdate("site " + std::to_string(x) + " outside lattice");
    if (!space_.contains(value))
        throw InvalidUpdate("spin value " + std::to_string(value) + " outside spin space");
    spins_[x] = value;
}

void Configuration::apply(const SiteUpdate& u)
{
    for (const auto& c : u.targets()) {
        if (c.site >= spins_.size())
            throw InvalidUpdate("site " + std::to_string(c.site) + " outside lattice");
        if (!space_.contains(c.value))
            throw InvalidUpdate("spin value " + std::to_string(c.value) + " outside spin space");
    }
    for (const auto& c : u.targets())
        spins_[c.site] = c.value;
}

SiteUpdate Configuration::inverse_of(const SiteUpdate& u) const
{
    SiteUpdate inv;
    for (const auto& c : u.targets())
        inv.push(c.site, spins_.at(c.site));
    return inv;
}

}  // namespace fskmc
