#pragma once

#include <string>

#include "fskmc/models.hpp"

namespace fskmc {

/**
 * Parameters of the exact equilibrium solutions, in the field convention of
 * those solutions (zero effective field at h = K in 1D and h = 2K in 2D).
 */
struct IsingExactParams {
    double beta = 1.0;
    double K = 1.0;
    double h = 0.0;

    double k_prime() const noexcept { return beta * K / 4.0; }
    double h_prime() const noexcept { return beta * (h - K) / 2.0; }
};

/// Equilibrium 1D coverage 1/2 (1 + sinh h' / sqrt(sinh^2 h' + exp(-4K'))).
double exact_1d_coverage(const IsingExactParams& p);

/// Ratio of the two transfer-matrix eigenvalues (the decay factor per site).
double exact_1d_decay(const IsingExactParams& p);

/// 1D two-point function E[sigma(x) sigma(y)] in the closed form as
/// usually printed: 1/4 (1 + e^{4K'} sinh^2 h') r^{|x-y|}. It does not
/// reduce to the coverage at x = y; see exact_1d_correlation.
double exact_1d_correlation_printed(const IsingExactParams& p, long x, long y);

/// 1D two-point function 1/4 [(1 + m)^2 + (1 - m^2) r^{|x-y|}] with
/// m = 2 c - 1, consistent with the transfer matrix.
double exact_1d_correlation(const IsingExactParams& p, long x, long y);

/// sinh(beta_c K / 2) = 1.
double critical_beta(double K);

struct CoverageResult {
    double value = 0.5;
    bool near_critical = false;
};

/// Onsager coverage at zero effective field (h = 2K):
/// 1/2 (1 + [1 - sinh(beta K / 2)^{-4}]^{1/8}) above beta_c, 1/2 below.
/// Within 1e-9 of beta_c returns 1/2 with near_critical set.
CoverageResult exact_2d_coverage(const IsingExactParams& p);

/// Arrhenius rates whose stationary law is the Ising measure of `p` on a
/// d-dimensional nearest-neighbour lattice: c_a = c_d = 1 and the rate
/// field shifted to h - 2 d K.
ArrheniusParams arrhenius_from_exact(const IsingExactParams& p, int dimension);

}  // namespace fskmc
