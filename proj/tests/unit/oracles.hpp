#pragma once

// Reference computations written independently of the library code.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fskmc/balance.hpp"
#include "fskmc/engine.hpp"
#include "fskmc/generator.hpp"

namespace oracle {

// Ising spins s = 2 sigma - 1 on a ring with weight exp(sum K' s s' + h' s).
inline std::vector<double> ising_ring_weights(int n, double kp, double hp)
{
    std::vector<double> w(std::size_t{1} << n);
    double z = 0.0;
    for (std::size_t st = 0; st < w.size(); ++st) {
        double e = 0.0;
        for (int x = 0; x < n; ++x) {
            const int s = (st >> x) & 1 ? 1 : -1;
            const int t = (st >> ((x + 1) % n)) & 1 ? 1 : -1;
            e += kp * s * t + hp * s;
        }
        w[st] = std::exp(e);
        z += w[st];
    }
    for (auto& v : w)
        v /= z;
    return w;
}

// <sigma(0) sigma(k)> for 0/1 occupations under the ring Gibbs weights.
inline double ring_correlation(const std::vector<double>& w, int k)
{
    double c = 0.0;
    for (std::size_t st = 0; st < w.size(); ++st)
        if ((st & 1) && ((st >> k) & 1))
            c += w[st];
    return c;
}

// Same quantity by the 2x2 transfer matrix on a ring of n sites.
inline double transfer_matrix_correlation(int n, double kp, double hp, int k)
{
    Eigen::Matrix2d t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double s = a ? 1 : -1, u = b ? 1 : -1;
            t(a, b) = std::exp(kp * s * u + hp * (s + u) / 2.0);
        }
    // Rescale by the top eigenvalue to keep powers finite.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(t);
    t /= es.eigenvalues().maxCoeff();
    auto pow = [&](int m) {
        Eigen::Matrix2d r = Eigen::Matrix2d::Identity();
        for (int i = 0; i < m; ++i)
            r = r * t;
        return r;
    };
    Eigen::Matrix2d occ = Eigen::Matrix2d::Zero();
    occ(1, 1) = 1.0;
    const double z = pow(n).trace();
    return (occ * pow(k) * occ * pow(n - k)).trace() / z;
}

// Minimum over every contiguous split of the weights into `workers` groups of
// the largest group sum.
inline double best_contiguous_max_load(const std::vector<double>& w, std::size_t workers)
{
    const std::size_t m = w.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> cuts;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) {
        if (left == 1) {
            double load = 0.0, worst = 0.0;
            std::size_t prev = 0;
            std::vector<std::size_t> all = cuts;
            all.push_back(m);
            for (std::size_t c : all) {
                load = 0.0;
                for (std::size_t i = prev; i < c; ++i)
                    load += w[i];
                worst = std::max(worst, load);
                prev = c;
            }
            best = std::min(best, worst);
            return;
        }
        for (std::size_t c = start + 1; c + left - 1 <= m; ++c) {
            cuts.push_back(c);
            rec(c, left - 1);
            cuts.pop_back();
        }
    };
    rec(0, workers);
    return best;
}

// Counts of final states over replicas, compared to probabilities p with a
// per-state multinomial bound of `sigmas` standard deviations.
inline bool within_multinomial(const std::vector<std::size_t>& counts, const Eigen::VectorXd& p, double sigmas,
                               double* worst_z = nullptr)
{
    std::size_t n = 0;
    for (auto c : counts)
        n += c;
    double worst = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = p(static_cast<Eigen::Index>(i)) * static_cast<double>(n);
        const double sd = std::sqrt(std::max(expected * (1.0 - p(static_cast<Eigen::Index>(i))), 1.0));
        worst = std::max(worst, std::abs(static_cast<double>(counts[i]) - expected) / sd);
    }
    if (worst_z)
        *worst_z = worst;
    return worst <= sigmas;
}

}  // namespace oracle
