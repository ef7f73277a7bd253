#include "fskmc/generator.hpp"

#include <cmath>
#include <functional>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace fskmc {

std::size_t state_space_size(std::size_t num_sites, int num_states, std::size_t limit)
{
    std::size_t n = 1;
    for (std::size_t i = 0; i < num_sites; ++i) {
        n *= static_cast<std::size_t>(num_states);
        if (n > limit)
            throw OracleScaleError("configuration space " + std::to_string(num_states) + "^" +
                                   std::to_string(num_sites) + " exceeds the oracle limit of " +
                                   std::to_string(limit) + " states");
    }
    return n;
}

std::size_t encode_state(const Configuration& sigma)
{
    const auto s = static_cast<std::size_t>(sigma.spin_space().num_states());
    std::size_t idx = 0;
    for (std::size_t x = sigma.size(); x-- > 0;)
        idx = idx * s + sigma[static_cast<Site>(x)];
    return idx;
}

Configuration decode_state(std::size_t index, std::size_t num_sites, SpinSpace space)
{
    const auto s = static_cast<std::size_t>(space.num_states());
    std::vector<Spin> spins(num_sites);
    for (std::size_t x = 0; x < num_sites; ++x) {
        spins[x] = static_cast<Spin>(index % s);
        index /= s;
    }
    return Configuration(std::move(spins), space);
}

GeneratorMatrix generator_matrix(const RateModel& model, const Lattice& lattice, std::span<const Site> anchors,
                                 std::size_t max_states)
{
    const SpinSpace space = model.spin_space();
    const std::size_t dim = state_space_size(lattice.size(), space.num_states(), max_states);

    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<Event> events;
    std::vector<double> off_diagonal_sum(dim, 0.0);
    for (std::size_t s = 0; s < dim; ++s) {
        Configuration sigma = decode_state(s, lattice.size(), space);
        for (Site x : anchors) {
            events.clear();
            model.enumerate(lattice, sigma, x, events);
            for (const auto& e : events) {
                const double share = e.rate / e.num_alternatives;
                for (const auto& u : e.updates()) {
                    Configuration next = sigma;
                    next.apply(u);
                    const std::size_t t = encode_state(next);
                    if (t == s)
                        continue;
                    triplets.emplace_back(static_cast<int>(s), static_cast<int>(t), share);
                    off_diagonal_sum[s] += share;
                }
            }
        }
    }
    for (std::size_t s = 0; s < dim; ++s)
        triplets.emplace_back(static_cast<int>(s), static_cast<int>(s), -off_diagonal_sum[s]);

    GeneratorMatrix g;
    g.q.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    g.q.setFromTriplets(triplets.begin(), triplets.end());
    g.q.makeCompressed();
    g.num_sites = lattice.size();
    g.num_states = space.num_states();
    return g;
}

DenseMatrix expm(const DenseMatrix& a, double t)
{
    DenseMatrix scaled = t * a;
    return scaled.exp();
}

DenseMatrix uniformized_exp(const DenseMatrix& q, double t, double tol)
{
    const Eigen::Index n = q.rows();
    double nu = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        nu = std::max(nu, -q(i, i));
    if (nu == 0.0 || t == 0.0)
        return DenseMatrix::Identity(n, n);

    // Split long horizons so the Poisson weights stay representable.
    const int pieces = std::max(1, static_cast<int>(std::ceil(nu * t / 50.0)));
    const double h = t / pieces;
    const double lam = nu * h;
    const DenseMatrix p = DenseMatrix::Identity(n, n) + q / nu;

    DenseMatrix term = DenseMatrix::Identity(n, n);
    double weight = std::exp(-lam);
    DenseMatrix sum = weight * term;
    double mass = weight;
    for (int k = 1; 1.0 - mass > tol && k < 10000; ++k) {
        term = term * p;
        weight *= lam / k;
        sum += weight * term;
        mass += weight;
    }
    DenseMatrix out = sum;
    for (int i = 1; i < pieces; ++i)
        out = out * sum;
    return out;
}

Eigen::VectorXd observable_vector(std::size_t num_sites, SpinSpace space,
                                  const std::function<double(const Configuration&)>& f)
{
    const std::size_t dim = state_space_size(num_sites, space.num_states(), std::size_t{1} << 24);
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (std::size_t s = 0; s < dim; ++s)
        v(static_cast<Eigen::Index>(s)) = f(decode_state(s, num_sites, space));
    return v;
}

double max_abs(const DenseMatrix& a) { return a.cwiseAbs().maxCoeff(); }

double inf_norm(const DenseMatrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace fskmc
