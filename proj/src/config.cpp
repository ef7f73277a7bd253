#include "fskmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "fskmc/random.hpp"

namespace fskmc {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"name", "c_a", "c_d", "beta", "K", "h", "field", "k1", "k2"}},
        {"lattice", {"dims"}},
        {"partition", {"cell", "strips", "inner", "inner_dt"}},
        {"schedule", {"kind", "dt", "time", "mu", "group_order", "rescale_random_time", "steps"}},
        {"run", {"seed", "workers", "run_id", "initial", "initial_density", "profile"}},
        {"observables", {"list", "stride", "k_max", "burn_in"}},
        {"balance", {"enabled", "mode", "cadence", "theta", "granularity"}},
        {"output", {"results", "workload"}},
    };
    return keys;
}

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double to_double(const std::string& v, const std::string& key)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, v), key);
    }
}

long long to_int(const std::string& v, const std::string& key)
{
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v), key);
    return x;
}

std::uint64_t to_u64(const std::string& v, const std::string& key)
{
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, v), key);
    return x;
}

bool to_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "on" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "off" || v == "no" || v == "0")
        return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, v), key);
}

std::vector<int> to_ints(const std::string& v, const std::string& key)
{
    std::vector<int> out;
    for (const auto& s : split(v, ','))
        out.push_back(static_cast<int>(to_int(s, key)));
    if (out.empty())
        throw ConfigError(fmt::format("{}: empty list", key), key);
    return out;
}

}  // namespace

std::size_t default_workers()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

RunConfig parse_config(std::istream& in, const std::string& source)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}:{}: {}", source, e.line(), e.message()), {}, static_cast<int>(e.line()));
    }

    RunConfig c;
    for (const auto& [section, body] : tree) {
        auto it = allowed_keys().find(section);
        if (it == allowed_keys().end()) {
            if (body.empty() && !body.data().empty())
                throw ConfigError(fmt::format("{}: key '{}' outside any section", source, section), section);
            throw ConfigError(fmt::format("{}: unknown section [{}]", source, section), section);
        }
        for (const auto& [key, node] : body) {
            const std::string path = section + "." + key;
            if (!it->second.count(key))
                throw ConfigError(fmt::format("{}: unknown key {}", source, path), path);
            const std::string v = trim(node.data());
            if (section == "model") {
                if (key == "name")
                    c.model.name = v;
                else if (key == "field") {
                    if (v == "rate")
                        c.model.field = FieldConvention::rate;
                    else if (v == "exact")
                        c.model.field = FieldConvention::exact;
                    else
                        throw ConfigError(fmt::format("{}: '{}' must be rate or exact", path, v), path);
                } else if (key == "k1")
                    c.model.zgb.k1 = to_double(v, path);
                else if (key == "k2")
                    c.model.zgb.k2 = to_double(v, path);
                else {
                    const double d = to_double(v, path);
                    auto& a = c.model.arrhenius;
                    (key == "c_a" ? a.c_a : key == "c_d" ? a.c_d : key == "beta" ? a.beta : key == "K" ? a.K : a.h) = d;
                }
            } else if (section == "lattice") {
                c.dims = to_ints(v, path);
            } else if (section == "partition") {
                if (key == "cell")
                    c.cell = to_ints(v, path);
                else if (key == "strips")
                    c.strips = to_ints(v, path);
                else if (key == "inner")
                    c.inner = to_ints(v, path);
                else
                    c.inner_dt = to_double(v, path);
            } else if (section == "schedule") {
                try {
                    if (key == "kind")
                        c.schedule = parse_schedule_kind(v);
                    else if (key == "group_order")
                        c.order = parse_group_order(v);
                } catch (const ScheduleError& e) {
                    throw ConfigError(fmt::format("{}: {}", path, e.what()), path);
                }
                if (key == "dt")
                    c.dt = to_double(v, path);
                else if (key == "time")
                    c.horizon = to_double(v, path);
                else if (key == "rescale_random_time")
                    c.rescale_random_time = to_bool(v, path);
                else if (key == "mu") {
                    const auto parts = split(v, ',');
                    if (parts.size() != 2)
                        throw ConfigError(fmt::format("{}: expected two probabilities mu_O, mu_E", path), path);
                    const double o = to_double(parts[0], path);
                    const double e = to_double(parts[1], path);
                    if (o < 0 || e < 0 || std::abs(o + e - 1.0) > 1e-9)
                        throw ConfigError(fmt::format("{}: probabilities must be non-negative and sum to 1", path),
                                          path);
                    c.mu_o = o;
                } else if (key == "steps") {
                    c.custom.clear();
                    for (const auto& item : split(v, ',')) {
                        const auto colon = item.find(':');
                        if (colon == std::string::npos || (item.substr(0, colon) != "O" && item.substr(0, colon) != "E"))
                            throw ConfigError(fmt::format("{}: '{}' is not GROUP:DURATION", path, item), path);
                        c.custom.emplace_back(item[0] == 'O' ? Color::O : Color::E,
                                              to_double(trim(item.substr(colon + 1)), path));
                    }
                }
            } else if (section == "run") {
                if (key == "seed")
                    c.seed = to_u64(v, path);
                else if (key == "workers")
                    c.workers = static_cast<std::size_t>(to_u64(v, path));
                else if (key == "run_id")
                    c.run_id = v;
                else if (key == "initial")
                    c.initial = static_cast<Spin>(to_int(v, path));
                else if (key == "profile")
                    c.profile = v;
                else
                    c.initial_density = to_double(v, path);
            } else if (section == "observables") {
                if (key == "list")
                    c.observables = split(v, ',');
                else if (key == "stride")
                    c.stride = static_cast<std::size_t>(to_u64(v, path));
                else if (key == "k_max")
                    c.k_max = static_cast<int>(to_int(v, path));
                else
                    c.burn_in = to_double(v, path);
            } else if (section == "balance") {
                if (key == "enabled")
                    c.balance.enabled = to_bool(v, path);
                else if (key == "mode")
                    c.balance.mode = v;
                else if (key == "cadence")
                    c.balance.cadence = static_cast<std::size_t>(to_u64(v, path));
                else if (key == "theta")
                    c.balance.theta = to_double(v, path);
                else
                    c.balance.granularity = static_cast<int>(to_int(v, path));
            } else if (section == "output") {
                (key == "results" ? c.results_path : c.workload_path) = v;
            }
        }
    }
    if (c.workers == 0)
        c.workers = default_workers();
    validate_config(c);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open config file '{}'", path));
    return parse_config(in, path);
}

std::unique_ptr<RateModel> make_model(const RunConfig& cfg)
{
    try {
        if (cfg.model.name == "zgb")
            return std::make_unique<ZgbModel>(cfg.model.zgb);
        ArrheniusParams p = cfg.model.arrhenius;
        if (cfg.model.field == FieldConvention::exact)
            p.h -= 2.0 * static_cast<double>(cfg.dims.size()) * p.K;
        if (cfg.model.name == "arrhenius")
            return std::make_unique<ArrheniusModel>(p);
        if (cfg.model.name == "kawasaki")
            return std::make_unique<KawasakiModel>(p);
    } catch (const ModelDomainError& e) {
        throw ConfigError(fmt::format("model: {}", e.what()), "model");
    }
    throw ConfigError(fmt::format("model.name: unknown model '{}' (arrhenius, kawasaki or zgb)", cfg.model.name),
                      "model.name");
}

Partition make_partition(const RunConfig& cfg, const Lattice& lattice, const RateModel& model)
{
    try {
        if (!cfg.strips.empty())
            return Partition::strips(lattice, cfg.strips, model.interaction_range(), model.update_range());
        std::vector<int> cell = cfg.cell;
        if (cell.size() == 1 && cfg.dims.size() > 1)
            cell.assign(cfg.dims.size(), cell[0]);
        return Partition::build(lattice, cell, model.interaction_range(), model.update_range());
    } catch (const PartitionError& e) {
        const std::string key = cfg.strips.empty() ? "lattice.dims / partition.cell" : "lattice.dims / partition.strips";
        throw ConfigError(fmt::format("{}: {}", key, e.what()), key);
    }
}

Schedule make_run_schedule(const RunConfig& cfg)
{
    try {
        if (cfg.schedule == ScheduleKind::custom)
            return custom_schedule(cfg.custom);
        ScheduleOptions opt;
        opt.mu_o = cfg.mu_o;
        opt.order = cfg.order;
        opt.rescale_random_time = cfg.rescale_random_time;
        opt.seed = SeedPolicy(cfg.seed).seed_for(~std::uint64_t{0}, ~std::uint64_t{0}, 0);
        return make_schedule(cfg.schedule, cfg.dt, cfg.horizon, opt);
    } catch (const ScheduleError& e) {
        throw ConfigError(fmt::format("schedule: {}", e.what()), "schedule");
    }
}

void validate_config(const RunConfig& cfg)
{
    if (cfg.dims.empty())
        throw ConfigError("lattice.dims: missing", "lattice.dims");
    for (int d : cfg.dims)
        if (d < 1)
            throw ConfigError(fmt::format("lattice.dims: extent {} must be positive", d), "lattice.dims");
    if (cfg.cell.empty() && cfg.strips.empty())
        throw ConfigError("partition.cell: missing (or give partition.strips)", "partition.cell");
    if (!cfg.cell.empty() && !cfg.strips.empty())
        throw ConfigError("partition.cell and partition.strips are mutually exclusive", "partition.strips");
    if (!cfg.cell.empty() && cfg.cell.size() != 1 && cfg.cell.size() != cfg.dims.size())
        throw ConfigError(fmt::format("partition.cell: {} extents for a {}-dimensional lattice", cfg.cell.size(),
                                      cfg.dims.size()),
                          "partition.cell");
    if (!cfg.inner.empty() && !(cfg.inner_dt > 0.0))
        throw ConfigError("partition.inner_dt: must be positive when partition.inner is set", "partition.inner_dt");
    if (cfg.schedule == ScheduleKind::custom && cfg.custom.empty())
        throw ConfigError("schedule.steps: required for the custom schedule", "schedule.steps");
    if (cfg.workers == 0)
        throw ConfigError("run.workers: must be positive", "run.workers");
    if (cfg.initial_density && !(*cfg.initial_density >= 0.0 && *cfg.initial_density <= 1.0))
        throw ConfigError("run.initial_density: must be in [0, 1]", "run.initial_density");
    if (cfg.profile != "uniform" && cfg.profile != "ramp")
        throw ConfigError(fmt::format("run.profile: '{}' must be uniform or ramp", cfg.profile), "run.profile");
    if (cfg.profile == "ramp" && cfg.initial_density)
        throw ConfigError("run.profile: ramp and run.initial_density are mutually exclusive", "run.profile");
    if (cfg.stride == 0)
        throw ConfigError("observables.stride: must be positive", "observables.stride");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0))
        throw ConfigError("observables.burn_in: must be in [0, 1)", "observables.burn_in");
    for (const auto& o : cfg.observables)
        if (o != "coverage" && o != "coverages" && o != "correlation")
            throw ConfigError(fmt::format("observables.list: unknown observable '{}'", o), "observables.list");
    if (cfg.balance.mode != "assign" && cfg.balance.mode != "strips")
        throw ConfigError("balance.mode: must be assign or strips", "balance.mode");
    if (cfg.balance.theta < 1.0)
        throw ConfigError("balance.theta: must be at least 1", "balance.theta");
    if (cfg.balance.cadence == 0)
        throw ConfigError("balance.cadence: must be positive", "balance.cadence");
    if (cfg.balance.granularity < 1)
        throw ConfigError("balance.granularity: must be at least 1", "balance.granularity");
    if (cfg.balance.enabled && cfg.balance.mode == "strips" && cfg.strips.empty())
        throw ConfigError("balance.mode: strips re-balancing needs partition.strips", "balance.mode");

    const auto model = make_model(cfg);
    if (cfg.initial >= model->spin_space().num_states())
        throw ConfigError(fmt::format("run.initial: state {} is outside the model's spin space", int(cfg.initial)),
                          "run.initial");
    const Lattice lattice(cfg.dims);
    const Partition p = make_partition(cfg, lattice, *model);
    if (!cfg.inner.empty()) {
        try {
            NestedPartition n(p, cfg.inner);
        } catch (const PartitionError& e) {
            throw ConfigError(fmt::format("partition.inner: {}", e.what()), "partition.inner");
        }
    }
    if (std::find(cfg.observables.begin(), cfg.observables.end(), "correlation") != cfg.observables.end() &&
        (cfg.k_max < 0 || cfg.k_max >= cfg.dims[0]))
        throw ConfigError("observables.k_max: must be below the extent of axis 0", "observables.k_max");
    make_run_schedule(cfg);
}

}  // namespace fskmc
