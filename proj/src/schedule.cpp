#include "fskmc/schedule.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fskmc/random.hpp"

namespace fskmc {

ScheduleKind parse_schedule_kind(std::string_view s)
{
    if (s == "lie")
        return ScheduleKind::lie;
    if (s == "strang")
        return ScheduleKind::strang;
    if (s == "random")
        return ScheduleKind::random;
    if (s == "custom")
        return ScheduleKind::custom;
    throw ScheduleError(fmt::format("unknown schedule kind '{}' (expected lie, strang, random or custom)", s));
}

std::string_view schedule_kind_name(ScheduleKind k) noexcept
{
    switch (k) {
    case ScheduleKind::lie: return "lie";
    case ScheduleKind::strang: return "strang";
    case ScheduleKind::random: return "random";
    case ScheduleKind::custom: return "custom";
    }
    return "?";
}

GroupOrder parse_group_order(std::string_view s)
{
    if (s == "OE")
        return GroupOrder::OE;
    if (s == "EO")
        return GroupOrder::EO;
    throw ScheduleError(fmt::format("unknown group order '{}' (expected OE or EO)", s));
}

double Schedule::scheduled_time() const noexcept
{
    double t = 0.0;
    for (const auto& s : steps)
        t += s.duration;
    return t;
}

Schedule make_schedule(ScheduleKind kind, double dt, double horizon, const ScheduleOptions& opt)
{
    if (kind == ScheduleKind::custom)
        throw ScheduleError("custom schedules are built from an explicit sub-step list");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ScheduleError(fmt::format("window length dt must be positive (got {})", dt));
    if (!(horizon >= dt))
        throw ScheduleError(fmt::format("horizon T = {} must be at least dt = {}", horizon, dt));
    if (kind == ScheduleKind::random && !(opt.mu_o >= 0.0 && opt.mu_o <= 1.0))
        throw ScheduleError(fmt::format("group probability mu_O = {} is outside [0, 1]", opt.mu_o));

    Schedule s;
    s.kind = kind;
    s.dt = dt;
    s.horizon = horizon;

    // The random schedule moves physical time at half the scheduled rate.
    const bool doubled = kind == ScheduleKind::random && opt.rescale_random_time;
    const double scheduled = doubled ? 2.0 * horizon : horizon;
    const double ratio = scheduled / dt;
    auto n = static_cast<std::size_t>(std::llround(ratio));
    double last = dt;
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
        n = static_cast<std::size_t>(std::ceil(ratio));
        last = scheduled - static_cast<double>(n - 1) * dt;
        s.warnings.push_back(fmt::format("T = {} is not a multiple of dt = {}; the last window is shortened to {}",
                                         horizon, dt, last));
    }
    s.num_windows = n;

    const Color first = opt.order == GroupOrder::OE ? Color::O : Color::E;
    const Color second = opposite(first);
    Rng rng(opt.seed);
    double t = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
        const double h = w + 1 == n ? last : dt;
        switch (kind) {
        case ScheduleKind::lie:
            s.steps.push_back({first, h, w});
            s.steps.push_back({second, h, w});
            t += h;
            break;
        case ScheduleKind::strang:
            s.steps.push_back({first, h / 2, w});
            s.steps.push_back({second, h, w});
            s.steps.push_back({first, h / 2, w});
            t += h;
            break;
        case ScheduleKind::random:
            s.steps.push_back({rng.uniform() < opt.mu_o ? Color::O : Color::E, h, w});
            t += h / 2;
            break;
        case ScheduleKind::custom: break;
        }
        s.window_end_time.push_back(t);
    }
    return s;
}

Schedule custom_schedule(std::vector<std::pair<Color, double>> steps)
{
    if (steps.empty())
        throw ScheduleError("custom schedule has no sub-steps");
    Schedule s;
    s.kind = ScheduleKind::custom;
    double t = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i].second >= 0.0) || !std::isfinite(steps[i].second))
            throw ScheduleError(fmt::format("custom sub-step {} has invalid duration {}", i, steps[i].second));
        s.steps.push_back({steps[i].first, steps[i].second, i});
        t += steps[i].second / 2;
        s.window_end_time.push_back(t);
        s.dt = std::max(s.dt, steps[i].second);
    }
    s.num_windows = steps.size();
    s.horizon = t;
    return s;
}

}  // namespace fskmc
