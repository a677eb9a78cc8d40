#ifndef RCMC_GREEDY_HPP
#define RCMC_GREEDY_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rcmc/kinetics.hpp"

namespace rcmc
{

/// Output of the steady-state selection step, shared by every method.
struct GreedyResult
{
    std::vector<int> pivots;              // s^(1..k), 0-based
    std::vector<double> pivot_diagonals;  // -K^(j-1)_ss at selection, 1/second
    std::optional<double> stop_diagonal;  // first rejected value, if any

    int k() const noexcept { return static_cast<int>(pivots.size()); }
};

/// Snapshot of the dense working matrix -K^(j) on T^(j), handed to an
/// observer after every accepted pivot. Used by tests only.
struct GreedySnapshot
{
    int j;
    std::span<const int> remaining;  // T^(j), increasing
    const Eigen::MatrixXd& minus_k;  // -K^(j) indexed like `remaining`
};

using GreedyObserver = std::function<void(const GreedySnapshot&)>;

/// Dense reference selection. Picks the largest -K^(j-1)_vv (ties to the
/// smallest index), stops when it falls below 1/t_max, eliminates by the
/// rank-one Schur update on off-diagonals and rebuilds every touched
/// diagonal as the negated sum of its column's off-diagonals.
GreedyResult greedy(const RateConstantMatrix& K,
                    double t_max,
                    const GreedyObserver& observer = {});

/// log det(-K)_{S+v} - log det(-K)_S by explicit determinants of principal
/// minors. Returns -infinity when the augmented minor is singular and throws
/// SingularPrefix when (-K)_SS itself is.
double marginal_gain_logdet(const RateConstantMatrix& K,
                            std::span<const int> S,
                            int v);

}  // namespace rcmc

#endif
