#include "fskmc/observables.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace fskmc {

double coverage(const Configuration& sigma, Spin species)
{
    if (sigma.size() == 0)
        return 0.0;
    std::size_t n = 0;
    for (Spin s : sigma.spins())
        n += s == species;
    return static_cast<double>(n) / static_cast<double>(sigma.size());
}

std::vector<double> coverages(const Configuration& sigma)
{
    std::vector<double> out(static_cast<std::size_t>(sigma.spin_space().num_states()), 0.0);
    for (Spin s : sigma.spins())
        out[s] += 1.0;
    for (auto& v : out)
        v /= static_cast<double>(sigma.size());
    return out;
}

std::vector<double> two_point_correlation(const Lattice& lattice, const Configuration& sigma, int k_max)
{
    if (k_max < 0 || k_max >= lattice.extent(0))
        throw std::out_of_range(
            fmt::format("correlation distance {} must be in [0, {})", k_max, lattice.extent(0)));
    const std::size_t n = lattice.size();
    const std::size_t stride = n / static_cast<std::size_t>(lattice.extent(0));
    auto s = sigma.spins();
    std::vector<double> out;
    for (int k = 0; k <= k_max; ++k) {
        const std::size_t shift = static_cast<std::size_t>(k) * stride;
        std::uint64_t acc = 0;
        for (std::size_t x = 0; x < n; ++x)
            acc += static_cast<std::uint64_t>(s[x]) * s[(x + shift) % n];
        out.push_back(static_cast<double>(acc) / static_cast<double>(n));
    }
    return out;
}

void ObservableSeries::push(double t, double v)
{
    if (!times.empty() && !(t > times.back()))
        throw std::invalid_argument(fmt::format("sample time {} does not increase past {}", t, times.back()));
    times.push_back(t);
    values.push_back(v);
}

std::vector<double> autocorrelation(const std::vector<double>& values, std::size_t max_lag, bool* degenerate)
{
    const std::size_t n = values.size();
    if (max_lag >= n)
        throw std::out_of_range(fmt::format("lag {} needs more than {} samples", max_lag, n));
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double c0 = 0.0;
    for (double v : values)
        c0 += (v - mean) * (v - mean);
    const bool flat = !(c0 > 1e-300);
    if (degenerate)
        *degenerate = flat;
    std::vector<double> acf(max_lag + 1, 1.0);
    if (flat)
        return acf;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i + k < n; ++i)
            c += (values[i] - mean) * (values[i + k] - mean);
        acf[k] = c / c0;
    }
    return acf;
}

Estimate time_average(const std::vector<double>& values, double burn_in)
{
    if (!(burn_in >= 0.0 && burn_in < 1.0))
        throw std::invalid_argument(fmt::format("burn-in fraction {} is outside [0, 1)", burn_in));
    const auto skip = static_cast<std::size_t>(std::floor(burn_in * static_cast<double>(values.size())));
    const std::size_t n = values.size() - skip;
    const std::size_t per = n / kBatches;
    if (per < 2)
        throw EstimationError(fmt::format("{} samples after burn-in; need at least {}", n, 2 * kBatches));

    Estimate e;
    e.mean = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(skip), values.end(), 0.0) /
             static_cast<double>(n);
    // Batches cover the last kBatches * per samples.
    const std::size_t start = values.size() - kBatches * per;
    std::vector<double> means(kBatches);
    for (std::size_t b = 0; b < kBatches; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < per; ++i)
            s += values[start + b * per + i];
        means[b] = s / static_cast<double>(per);
    }
    const double bm = std::accumulate(means.begin(), means.end(), 0.0) / kBatches;
    double var = 0.0;
    for (double m : means)
        var += (m - bm) * (m - bm);
    var /= kBatches - 1;
    e.std_error = std::sqrt(var / kBatches);
    return e;
}

Estimate sample_mean(const std::vector<double>& values)
{
    const std::size_t n = values.size();
    if (n < 2)
        throw EstimationError("need at least two samples");
    Estimate e;
    e.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double v : values)
        var += (v - e.mean) * (v - e.mean);
    var /= static_cast<double>(n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(n));
    return e;
}

DecayFit correlation_decay_fit(const std::vector<double>& lambda, std::size_t k_min)
{
    k_min = std::max<std::size_t>(k_min, 1);
    if (lambda.size() < k_min + 3)
        throw EstimationError("need at least three correlation values in the fit range");
    const auto m = static_cast<Eigen::Index>(lambda.size() - k_min);
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double k = static_cast<double>(k_min) + static_cast<double>(i);
        const double v = lambda[k_min + static_cast<std::size_t>(i)];
        if (!(v > 0.0))
            throw EstimationError(fmt::format("correlation at k = {} is not positive ({})", k, v));
        a(i, 0) = 1.0;
        a(i, 1) = -std::log(k);
        a(i, 2) = -k;
        b(i) = std::log(v);
    }
    const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
    DecayFit fit;
    fit.alpha = coef(1);
    fit.xi = coef(2) > 0.0 ? 1.0 / coef(2) : std::numeric_limits<double>::infinity();
    fit.residual = std::sqrt((a * coef - b).squaredNorm() / static_cast<double>(m));
    const double kmax = static_cast<double>(lambda.size() - 1);
    const double kmin = static_cast<double>(k_min);
    const double exp_part = std::abs(coef(2)) * (kmax - kmin);
    const double pow_part = std::abs(coef(1)) * std::log(kmax / kmin);
    fit.exponential_dominated = exp_part > pow_part;
    return fit;
}

std::vector<double> histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins)
{
    if (bins == 0 || !(hi > lo))
        throw std::invalid_argument("histogram needs bins > 0 and hi > lo");
    std::vector<double> h(bins, 0.0);
    const double w = (hi - lo) / static_cast<double>(bins);
    std::size_t counted = 0;
    for (double v : values) {
        if (v < lo || v >= hi)
            continue;
        auto b = static_cast<std::size_t>((v - lo) / w);
        h[std::min(b, bins - 1)] += 1.0;
        ++counted;
    }
    if (counted)
        for (auto& x : h)
            x /= static_cast<double>(counted) * w;
    return h;
}

}  // namespace fskmc
