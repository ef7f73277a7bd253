#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fskmc/lattice.hpp"
#include "fskmc/models.hpp"

namespace fskmc {

class OracleScaleError : public std::length_error {
public:
    using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultOracleStates = std::size_t{1} << 14;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXd;

/// Dense-indexable master-equation generator over the full configuration
/// space. State index = sum_x sigma(x) * S^x.
struct GeneratorMatrix {
    SparseMatrix q;
    std::size_t num_sites = 0;
    int num_states = 0;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(q.rows()); }
    DenseMatrix dense() const { return DenseMatrix(q); }
};

std::size_t state_space_size(std::size_t num_sites, int num_states, std::size_t limit = kDefaultOracleStates);

std::size_t encode_state(const Configuration& sigma);
Configuration decode_state(std::size_t index, std::size_t num_sites, SpinSpace space);

/// Q[s, s'] = total rate of events anchored in `anchors` that take s to s';
/// diagonal = -(row sum of off-diagonals).
GeneratorMatrix generator_matrix(const RateModel& model, const Lattice& lattice, std::span<const Site> anchors,
                                 std::size_t max_states = kDefaultOracleStates);

/// Matrix exponential exp(t A) by Pade scaling-and-squaring.
DenseMatrix expm(const DenseMatrix& a, double t = 1.0);

/// exp(t Q) for a generator by uniformization:
/// sum_k Poisson(k; t*nu) P^k with P = I + Q / nu.
DenseMatrix uniformized_exp(const DenseMatrix& q, double t, double tol = 1e-15);

/// Column vector of an observable evaluated on every state.
Eigen::VectorXd observable_vector(std::size_t num_sites, SpinSpace space,
                                  const std::function<double(const Configuration&)>& f);

double max_abs(const DenseMatrix& a);
double inf_norm(const DenseMatrix& a);

}  // namespace fskmc
