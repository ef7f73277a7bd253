#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fskmc/lattice.hpp"

namespace fskmc {

class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fraction of sites in state `species`.
double coverage(const Configuration& sigma, Spin species = 1);

/// Fraction of sites in each state.
std::vector<double> coverages(const Configuration& sigma);

/// lambda(k) = (1/N) sum_x sigma(x) sigma(x + k e_0), k = 0..k_max.
/// Throws std::out_of_range when k_max >= extent of axis 0.
std::vector<double> two_point_correlation(const Lattice& lattice, const Configuration& sigma, int k_max);

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::size_t replica = 0;

    void push(double t, double v);
};

/// Biased autocorrelation normalized to 1 at lag 0. A constant series
/// returns all ones and sets *degenerate.
std::vector<double> autocorrelation(const std::vector<double>& values, std::size_t max_lag,
                                    bool* degenerate = nullptr);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

inline constexpr std::size_t kBatches = 16;

/// Mean after discarding the first burn_in fraction; standard error from
/// 16 batch means. Needs at least 2 samples per batch.
Estimate time_average(const std::vector<double>& values, double burn_in);

/// Mean and standard error of independent samples.
Estimate sample_mean(const std::vector<double>& values);

/// Least-squares fit of log lambda(k) = c - alpha log k - k / xi for k >= 1.
struct DecayFit {
    double alpha = 0.0;
    double xi = 0.0;  ///< +inf when the fitted exponential rate is <= 0
    double residual = 0.0;
    bool exponential_dominated = false;  ///< the k/xi term explains most of the decay
};

DecayFit correlation_decay_fit(const std::vector<double>& lambda, std::size_t k_min = 1);

/// Histogram of samples over [lo, hi) with `bins` bins; returns densities.
std::vector<double> histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins);

}  // namespace fskmc
