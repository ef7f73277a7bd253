#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fskmc/lattice.hpp"

namespace fskmc {

class ModelDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/**
 * One transition channel (x, omega) with rate c(x, omega; sigma).
 *
 * Most events have a single update. Events whose partner site is drawn at
 * execution time (ZGB pair adsorption and reaction) list every admissible
 * update; one of them is chosen uniformly when the event fires, so each
 * alternative carries rate / num_alternatives.
 */
struct Event {
    static constexpr std::size_t kMaxAlternatives = 6;

    Site anchor = 0;
    double rate = 0.0;
    std::array<SiteUpdate, kMaxAlternatives> alternatives{};
    std::uint8_t num_alternatives = 0;

    void add_alternative(const SiteUpdate& u);
    std::span<const SiteUpdate> updates() const noexcept { return {alternatives.data(), num_alternatives}; }
};

/// A micro-mechanism: enumerates the events anchored at a site.
class RateModel {
public:
    virtual ~RateModel() = default;

    virtual std::string_view name() const = 0;
    virtual SpinSpace spin_space() const = 0;

    /// Radius L of the ball around the anchor that rates read and updates touch.
    virtual int interaction_range() const = 0;

    /// Radius W <= L of the ball that updates may write (0 for spin flips).
    virtual int update_range() const = 0;

    /// Appends every event anchored at x with positive rate.
    virtual void enumerate(const Lattice& lattice, const Configuration& sigma, Site x, std::vector<Event>& out) const = 0;

    std::vector<Event> events(const Lattice& lattice, const Configuration& sigma, Site x) const
    {
        std::vector<Event> out;
        enumerate(lattice, sigma, x, out);
        return out;
    }
};

/// Arrhenius adsorption/desorption constants with a nearest-neighbour
/// interaction of strength K and a field h.
struct ArrheniusParams {
    double c_a = 1.0;
    double c_d = 1.0;
    double beta = 1.0;
    double K = 1.0;
    double h = 0.0;

    void validate() const;
};

/// Desorption potential U(x) = K * (occupied nearest neighbours) + h.
double arrhenius_potential(const ArrheniusParams& p, int occupied_neighbors);

/// c(x, sigma) = c_a (1 - sigma(x)) + c_d sigma(x) exp(-beta U(x)).
double arrhenius_rate(const ArrheniusParams& p, Spin spin, int occupied_neighbors);

std::vector<Event> arrhenius_events(const Lattice& lattice, const Configuration& sigma, Site x,
                                    const ArrheniusParams& p);

/// Spin exchange with a vacant nearest neighbour; the hop rate is the
/// desorption rate of the source site, c_d exp(-beta U(x)).
std::vector<Event> kawasaki_events(const Lattice& lattice, const Configuration& sigma, Site x,
                                   const ArrheniusParams& p);

struct ZgbParams {
    double k1 = 0.5;  ///< CO fraction of the adsorption flux
    double k2 = 1.0;  ///< reaction rate constant

    void validate() const;
};

/// Stored ZGB species codes. Rate formulas use the signed values
/// vacant = 0, CO = +1, O = -1.
namespace zgb {
inline constexpr Spin kVacant = 0;
inline constexpr Spin kCO = 1;
inline constexpr Spin kO = 2;

int signed_value(Spin s);
}  // namespace zgb

/// Events of the ZGB CO-oxidation table at site x:
///   vacant: CO adsorption k1 (1 - s^2) and O2 adsorption (1 - k1) r2,
///   CO:     reaction with an O neighbour, k2 r3,
///   O:      reaction with a CO neighbour, k2 r4,
/// with r2 = (1 - s^2) nu_0 / 4, r3 = s (1 + s) nu_O / 8, r4 = s (s - 1) nu_CO / 8.
std::vector<Event> zgb_events(const Lattice& lattice, const Configuration& sigma, Site x, const ZgbParams& p);

class ArrheniusModel final : public RateModel {
public:
    explicit ArrheniusModel(ArrheniusParams p);

    std::string_view name() const override { return "arrhenius"; }
    SpinSpace spin_space() const override { return SpinSpace(2); }
    int interaction_range() const override { return 1; }
    int update_range() const override { return 0; }
    void enumerate(const Lattice& lattice, const Configuration& sigma, Site x, std::vector<Event>& out) const override;

    const ArrheniusParams& params() const noexcept { return p_; }

private:
    ArrheniusParams p_;
};

class KawasakiModel final : public RateModel {
public:
    explicit KawasakiModel(ArrheniusParams p);

    std::string_view name() const override { return "kawasaki"; }
    SpinSpace spin_space() const override { return SpinSpace(2); }
    int interaction_range() const override { return 1; }
    int update_range() const override { return 1; }
    void enumerate(const Lattice& lattice, const Configuration& sigma, Site x, std::vector<Event>& out) const override;

    const ArrheniusParams& params() const noexcept { return p_; }

private:
    ArrheniusParams p_;
};

class ZgbModel final : public RateModel {
public:
    explicit ZgbModel(ZgbParams p);

    std::string_view name() const override { return "zgb"; }
    SpinSpace spin_space() const override { return SpinSpace(3); }
    int interaction_range() const override { return 1; }
    int update_range() const override { return 1; }
    void enumerate(const Lattice& lattice, const Configuration& sigma, Site x, std::vector<Event>& out) const override;

    const ZgbParams& params() const noexcept { return p_; }

private:
    ZgbParams p_;
};

}  // namespace fskmc
