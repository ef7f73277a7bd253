#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fskmc/partition.hpp"

namespace fskmc {

class ScheduleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ScheduleKind { lie, strang, random, custom };

/// Which sub-lattice acts first within a deterministic macro-window.
enum class GroupOrder { OE, EO };

ScheduleKind parse_schedule_kind(std::string_view s);
std::string_view schedule_kind_name(ScheduleKind k) noexcept;
GroupOrder parse_group_order(std::string_view s);

struct SubStep {
    Color group = Color::O;
    double duration = 0.0;
    std::size_t window = 0;  ///< macro-window this sub-step belongs to
};

/**
 * Processor communication schedule: the realized (group, duration) sequence.
 *
 * Physical time of a macro-window is its duration for Lie/Strang. The random
 * schedule advances only half the lattice per window, so its averaged
 * generator runs at half speed; with rescale_random_time the scheduled
 * horizon is doubled so that the physical time still reaches T.
 */
struct Schedule {
    ScheduleKind kind = ScheduleKind::lie;
    double dt = 0.0;
    double horizon = 0.0;  ///< physical time T requested
    std::vector<SubStep> steps;
    std::size_t num_windows = 0;
    std::vector<double> window_end_time;  ///< physical time at the end of each window
    std::vector<std::string> warnings;

    double scheduled_time() const noexcept;
};

struct ScheduleOptions {
    double mu_o = 0.5;  ///< probability of group O in the random schedule
    GroupOrder order = GroupOrder::OE;
    bool rescale_random_time = true;
    std::uint64_t seed = 0;
};

/// Builds a Lie, Strang or random schedule with n = ceil(T/dt) macro-windows.
/// A horizon that is not a multiple of dt shortens the last window and
/// records a warning.
Schedule make_schedule(ScheduleKind kind, double dt, double horizon, const ScheduleOptions& opt = {});

/// A schedule from an explicit sub-step list; every sub-step is its own
/// window and physical time advances by half of each duration (each group
/// covers half of the lattice).
Schedule custom_schedule(std::vector<std::pair<Color, double>> steps);

}  // namespace fskmc
