#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fskmc/models.hpp"
#include "fskmc/partition.hpp"
#include "fskmc/schedule.hpp"

namespace fskmc {

/// Bad config text or values. `key` is the section.key path when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, std::string key = {}, int line = 0)
        : std::runtime_error(msg), key_(std::move(key)), line_(line)
    {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

enum class FieldConvention { rate, exact };

struct ModelConfig {
    std::string name = "arrhenius";
    ArrheniusParams arrhenius;
    ZgbParams zgb;
    FieldConvention field = FieldConvention::rate;
};

struct BalanceConfig {
    bool enabled = false;
    std::string mode = "assign";  ///< assign | strips
    std::size_t cadence = 10;
    double theta = 2.0;
    int granularity = 1;
};

struct RunConfig {
    ModelConfig model;
    std::vector<int> dims{64};
    std::vector<int> cell;             ///< empty when strips are given
    std::vector<int> strips;           ///< strip starts along axis 0
    std::vector<int> inner;            ///< nested inner tile extent (optional)
    double inner_dt = 0.0;

    ScheduleKind schedule = ScheduleKind::lie;
    double dt = 1.0;
    double horizon = 10.0;
    double mu_o = 0.5;
    GroupOrder order = GroupOrder::OE;
    bool rescale_random_time = true;
    std::vector<std::pair<Color, double>> custom;

    std::uint64_t seed = 1;
    std::size_t workers = 0;  ///< 0: available parallelism
    std::string run_id = "run";
    Spin initial = 0;
    std::optional<double> initial_density;  ///< Bernoulli fill of state 1
    /// uniform, or ramp: state 1 with probability rising linearly along
    /// axis 0 from 0 at the origin to 1 at the middle, 1 beyond.
    std::string profile = "uniform";

    std::vector<std::string> observables{"coverage"};
    std::size_t stride = 1;
    int k_max = 10;
    double burn_in = 0.2;

    BalanceConfig balance;

    std::string results_path = "results.csv";
    std::string workload_path;  ///< empty: no workload log
};

/// Parses INI text. Unknown sections or keys are rejected.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Checks every value against the modules' preconditions (builds the
/// partition once). Throws ConfigError naming the key.
void validate_config(const RunConfig& cfg);

/// Model implied by the config (field convention applied).
std::unique_ptr<RateModel> make_model(const RunConfig& cfg);

/// Partition implied by the config for the model's ranges.
Partition make_partition(const RunConfig& cfg, const Lattice& lattice, const RateModel& model);

Schedule make_run_schedule(const RunConfig& cfg);

std::size_t default_workers();

}  // namespace fskmc
