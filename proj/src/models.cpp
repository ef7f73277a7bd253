#include "fskmc/models.hpp"

#include <cmath>

namespace fskmc {

namespace {

void require_binary(const Configuration& sigma, Site x, std::string_view model)
{
    if (sigma[x] > 1)
        throw ModelDomainError(std::string(model) + " model needs spins in {0,1}; site " + std::to_string(x) +
                               " holds " + std::to_string(sigma[x]));
}

int occupied_neighbors(const Lattice& lattice, const Configuration& sigma, Site x)
{
    int n = 0;
    for (Site y : lattice.nearest(x)) {
        if (sigma[y] > 1)
            throw ModelDomainError("neighbour site " + std::to_string(y) + " holds spin " + std::to_string(sigma[y]));
        n += sigma[y];
    }
    return n;
}

}  // namespace

void Event::add_alternative(const SiteUpdate& u)
{
    if (num_alternatives == kMaxAlternatives)
        throw InvalidUpdate("event has too many alternative updates");
    alternatives[num_alternatives++] = u;
}

void ArrheniusParams::validate() const
{
    if (!(c_a >= 0.0) || !(c_d >= 0.0))
        throw std::invalid_argument("adsorption and desorption constants must be nonnegative");
    if (!(beta >= 0.0))
        throw std::invalid_argument("inverse temperature must be nonnegative");
    if (!std::isfinite(K) || !std::isfinite(h))
        throw std::invalid_argument("interaction and field must be finite");
}

double arrhenius_potential(const ArrheniusParams& p, int occupied_neighbors)
{
    return p.K * occupied_neighbors + p.h;
}

double arrhenius_rate(const ArrheniusParams& p, Spin spin, int occupied_neighbors)
{
    if (spin == 0)
        return p.c_a;
    return p.c_d * std::exp(-p.beta * arrhenius_potential(p, occupied_neighbors));
}

std::vector<Event> arrhenius_events(const Lattice& lattice, const Configuration& sigma, Site x,
                                    const ArrheniusParams& p)
{
    return ArrheniusModel(p).events(lattice, sigma, x);
}

std::vector<Event> kawasaki_events(const Lattice& lattice, const Configuration& sigma, Site x,
                                   const ArrheniusParams& p)
{
    return KawasakiModel(p).events(lattice, sigma, x);
}

std::vector<Event> zgb_events(const Lattice& lattice, const Configuration& sigma, Site x, const ZgbParams& p)
{
    return ZgbModel(p).events(lattice, sigma, x);
}

ArrheniusModel::ArrheniusModel(ArrheniusParams p) : p_(p) { p_.validate(); }

void ArrheniusModel::enumerate(const Lattice& lattice, const Configuration& sigma, Site x,
                               std::vector<Event>& out) const
{
    require_binary(sigma, x, name());
    const Spin s = sigma[x];
    const double rate = arrhenius_rate(p_, s, occupied_neighbors(lattice, sigma, x));
    if (!(rate > 0.0))
        return;
    Event& e = out.emplace_back();
    e.anchor = x;
    e.rate = rate;
    e.add_alternative(SiteUpdate{{x, static_cast<Spin>(1 - s)}});
}

KawasakiModel::KawasakiModel(ArrheniusParams p) : p_(p) { p_.validate(); }

void KawasakiModel::enumerate(const Lattice& lattice, const Configuration& sigma, Site x,
                              std::vector<Event>& out) const
{
    require_binary(sigma, x, name());
    const int n = occupied_neighbors(lattice, sigma, x);
    if (sigma[x] == 0)
        return;
    const double rate = p_.c_d * std::exp(-p_.beta * arrhenius_potential(p_, n));
    if (!(rate > 0.0))
        return;
    for (Site y : lattice.nearest(x)) {
        if (sigma[y] != 0)
            continue;
        Event& e = out.emplace_back();
        e.anchor = x;
        e.rate = rate;
        e.add_alternative(SiteUpdate{{x, 0}, {y, 1}});
    }
}

void ZgbParams::validate() const
{
    if (!(k1 >= 0.0 && k1 <= 1.0))
        throw std::invalid_argument("ZGB k1 must lie in [0,1]");
    if (!(k2 >= 0.0))
        throw std::invalid_argument("ZGB k2 must be nonnegative");
}

int zgb::signed_value(Spin s)
{
    switch (s) {
    case kVacant: return 0;
    case kCO: return 1;
    case kO: return -1;
    default: throw ModelDomainError("ZGB spin code " + std::to_string(s) + " is not one of {0,1,2}");
    }
}

ZgbModel::ZgbModel(ZgbParams p) : p_(p) { p_.validate(); }

void ZgbModel::enumerate(const Lattice& lattice, const Configuration& sigma, Site x, std::vector<Event>& out) const
{
    const int s = zgb::signed_value(sigma[x]);
    auto neigh = lattice.nearest(x);

    // nu[k + 1] counts neighbours with signed value k.
    std::array<int, 3> nu{0, 0, 0};
    for (Site y : neigh)
        ++nu[static_cast<std::size_t>(zgb::signed_value(sigma[y]) + 1)];

    auto partners = [&](Spin wanted, Spin x_value, Spin y_value, Event& e) {
        for (Site y : neigh)
            if (sigma[y] == wanted)
                e.add_alternative(SiteUpdate{{x, x_value}, {y, y_value}});
    };

    const double vacant_factor = 1.0 - s * s;
    const double co_adsorb = p_.k1 * vacant_factor;
    if (co_adsorb > 0.0) {
        Event& e = out.emplace_back();
        e.anchor = x;
        e.rate = co_adsorb;
        e.add_alternative(SiteUpdate{{x, zgb::kCO}});
    }

    const double r2 = 0.25 * vacant_factor * nu[1];
    const double o2_adsorb = (1.0 - p_.k1) * r2;
    if (o2_adsorb > 0.0) {
        Event& e = out.emplace_back();
        e.anchor = x;
        e.rate = o2_adsorb;
        partners(zgb::kVacant, zgb::kO, zgb::kO, e);
    }

    const double r3 = 0.125 * s * (1 + s) * nu[0];
    if (p_.k2 * r3 > 0.0) {
        Event& e = out.emplace_back();
        e.anchor = x;
        e.rate = p_.k2 * r3;
        partners(zgb::kO, zgb::kVacant, zgb::kVacant, e);
    }

    const double r4 = 0.125 * s * (s - 1) * nu[2];
    if (p_.k2 * r4 > 0.0) {
        Event& e = out.emplace_back();
        e.anchor = x;
        e.rate = p_.k2 * r4;
        partners(zgb::kCO, zgb::kVacant, zgb::kVacant, e);
    }
}

}  // namespace fskmc
