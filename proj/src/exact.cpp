#include "fskmc/exact.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fskmc {

double exact_1d_coverage(const IsingExactParams& p)
{
    const double sh = std::sinh(p.h_prime());
    return 0.5 * (1.0 + sh / std::sqrt(sh * sh + std::exp(-4.0 * p.k_prime())));
}

double exact_1d_decay(const IsingExactParams& p)
{
    const double k = p.k_prime();
    const double hp = p.h_prime();
    const double sh = std::sinh(hp);
    const double root = std::exp(-k) * std::sqrt(1.0 + std::exp(4.0 * k) * sh * sh);
    const double a = std::exp(k) * std::cosh(hp);
    return (a - root) / (a + root);
}

double exact_1d_correlation_printed(const IsingExactParams& p, long x, long y)
{
    const double sh = std::sinh(p.h_prime());
    const double prefactor = 0.25 * (1.0 + std::exp(4.0 * p.k_prime()) * sh * sh);
    return prefactor * std::pow(exact_1d_decay(p), static_cast<double>(std::labs(x - y)));
}

double exact_1d_correlation(const IsingExactParams& p, long x, long y)
{
    const double m = 2.0 * exact_1d_coverage(p) - 1.0;
    const double r = std::pow(exact_1d_decay(p), static_cast<double>(std::labs(x - y)));
    return 0.25 * ((1.0 + m) * (1.0 + m) + (1.0 - m * m) * r);
}

double critical_beta(double K)
{
    if (!(K > 0.0))
        throw std::domain_error("critical inverse temperature needs K > 0");
    return 2.0 / K * std::asinh(1.0);
}

CoverageResult exact_2d_coverage(const IsingExactParams& p)
{
    CoverageResult r;
    const double bc = critical_beta(p.K);
    if (std::abs(p.beta - bc) <= 1e-9) {
        r.near_critical = true;
        return r;
    }
    if (p.beta < bc)
        return r;
    const double s = std::sinh(0.5 * p.beta * p.K);
    r.value = 0.5 * (1.0 + std::pow(1.0 - std::pow(s, -4.0), 0.125));
    return r;
}

ArrheniusParams arrhenius_from_exact(const IsingExactParams& p, int dimension)
{
    ArrheniusParams a;
    a.c_a = 1.0;
    a.c_d = 1.0;
    a.beta = p.beta;
    a.K = p.K;
    a.h = p.h - 2.0 * dimension * p.K;
    return a;
}

}  // namespace fskmc
