#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fskmc/generator.hpp"
#include "fskmc/models.hpp"
#include "fskmc/partition.hpp"
#include "fskmc/schedule.hpp"

namespace fskmc {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured quantity
    double tolerance = 0.0;  ///< bound it was compared against
    std::string detail;
};

std::string format_check(const CheckResult& r);

/// Generator of all events anchored in cells of one color.
SparseMatrix color_generator(const RateModel& model, const Partition& partition, Color c,
                             std::size_t max_states = kDefaultOracleStates);

/// Generator of events anchored in the boundary (or interior) sites of one color.
SparseMatrix color_boundary_generator(const RateModel& model, const Partition& partition, Color c, bool boundary,
                                      std::size_t max_states = kDefaultOracleStates);

/// One-window transition matrices (row-stochastic, rows = start state).
DenseMatrix lie_transition(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt, GroupOrder order = GroupOrder::OE);
DenseMatrix strang_transition(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt,
                              GroupOrder order = GroupOrder::OE);
/// Mean over the group draw of one random window: (e^{dt Q^O} + e^{dt Q^E}) / 2.
DenseMatrix random_transition(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt);

/// Local defects in the infinity norm.
double lie_defect(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt);
double strang_defect(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt);
/// Mean random window against exp(dt (Q^O + Q^E) / 2).
double random_defect(const DenseMatrix& q_o, const DenseMatrix& q_e, double dt);

CheckResult check_additivity(const RateModel& model, const Partition& partition, double tol = 1e-12);
CheckResult check_factorization(const RateModel& model, const Partition& partition, Color c, double dt,
                                double tol = 1e-10);

/// Full commutator against its boundary-only reconstruction, plus the three
/// commutators involving interior generators, which must vanish.
std::vector<CheckResult> check_commutator_support(const RateModel& model, const Partition& partition,
                                                  double tol = 1e-10);

/// defect(dt) / defect(dt / 2) inside [lo, hi].
CheckResult check_defect_ratio(ScheduleKind kind, const RateModel& model, const Partition& partition, double dt,
                               double lo, double hi);

/// Two random windows in expectation differ from exp(dt Q) by
/// (Q^O - Q^E)^2 dt^2 / 4 up to O(dt^3): the relative remainder must shrink
/// about linearly between dt and dt / 2.
CheckResult check_random_taylor(const RateModel& model, const Partition& partition, double dt);

/// Exactly averaged generator: (Q^O + Q^E) / 2 == Q / 2.
CheckResult check_averaged_generator(const RateModel& model, const Partition& partition, double tol = 1e-12);

struct DefectConstants {
    int cell_size = 0;
    double lie = 0.0;     ///< RMS of [Q^E, Q^O] f / 2
    double random = 0.0;  ///< RMS of (Q^E - Q^O)^2 f / 4
    double ratio = 0.0;   ///< random / lie
};

/// Leading defect constants on the coverage observable for 1D cells of size q.
std::vector<DefectConstants> lie_vs_random_constants(const RateModel& model, int num_sites,
                                                     const std::vector<int>& cell_sizes, std::size_t max_states);

/// Transition matrix of one outer Lie window of a nested partition with inner
/// window = outer duration: for each outer color in order, the inner O
/// tiles then the inner E tiles of that color's cells.
DenseMatrix nested_lie_transition(const RateModel& model, const NestedPartition& nested, double dt);

struct OracleSuiteOptions {
    ArrheniusParams params{1.0, 1.0, 1.0, 1.0, 1.0};
    int num_sites = 6;
    int cell_size = 3;
    int commutator_sites = 8;
    double ratio_dt = 0.2;
};

/// Every exact-matrix check in one report.
std::vector<CheckResult> run_oracle_suite(const OracleSuiteOptions& opt = {});

struct WeakErrorPoint {
    double dt = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    double error = 0.0;  ///< |mean - reference|
    double error_se = 0.0;
};

struct WeakErrorResult {
    std::vector<WeakErrorPoint> points;
    double reference = 0.0;
    double reference_se = 0.0;
    bool oracle_reference = false;
    double slope = 0.0;
    bool monotone = false;
    bool inconclusive = false;
    bool passed = false;
    std::string status;
};

struct WeakErrorSetup {
    const RateModel* model = nullptr;
    const Partition* partition = nullptr;
    ScheduleKind kind = ScheduleKind::lie;
    std::vector<double> dts{1.0, 0.5, 0.25, 0.1};
    double horizon = 5.0;
    std::size_t replicas = 20000;
    std::uint64_t seed = 1;
    Spin initial = 0;
    std::function<double(const Configuration&)> observable;
    double min_slope = 0.7;
    std::size_t oracle_limit = std::size_t{1} << 12;
};

/// Weak error of E f(sigma_T) per dt against the exact (oracle scale) or a
/// serial-kernel reference, with a log-log slope fit. Inconclusive when an
/// error at the two smallest dt is within 3 standard errors of zero.
WeakErrorResult weak_error_order(const WeakErrorSetup& setup);

}  // namespace fskmc
