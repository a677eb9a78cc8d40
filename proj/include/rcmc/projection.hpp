#ifndef RCMC_PROJECTION_HPP
#define RCMC_PROJECTION_HPP

#include <vector>

#include "rcmc/cholesky.hpp"
#include "rcmc/greedy.hpp"
#include "rcmc/kinetics.hpp"

namespace rcmc
{

enum class TrajectoryMode
{
    full,
    last,
};

struct TrajectoryPoint
{
    int j;                  // 1-based iteration
    double time;            // reference time t^(j), seconds
    std::vector<double> q;  // approximate yields q^(j)
    double elapsed;         // wall time spent on this point, seconds
};

struct Trajectory
{
    TrajectoryMode mode = TrajectoryMode::full;
    std::vector<TrajectoryPoint> points;
};

/// Reference times and approximate yields from a selection run.
///
/// For S = S^(j), T = T^(j) and y = p_T + (-L_TS) L_SS^{-1} p_S:
///   t^(j) = pi_s / d_s^(j-1)                     (s = s^(j))
///   q_T   = y / (1 + a),  a_v = pi_S^T L_SS^{-1} (-L_Sv) / pi_v
///   q_S   = Pi_S L_SS^{-1} (-L_ST) Pi_T^{-1} q_T
/// L_SS^{-1} is applied through the triangular pivot block of the factor.
/// Every factor of these products is entrywise nonnegative, so all
/// accumulations add like-sign terms. Only the pivot rows of the factor are
/// read, which every selection method completes.
///
/// Throws IncompatibleFactor when the factor's pivots differ from the
/// result's.
Trajectory project(const RateConstantMatrix& K,
                   const GreedyResult& result,
                   const CholeskyFactor& factor,
                   const YieldVector& p,
                   TrajectoryMode mode);

/// pi rescaled to the mass of p: the t -> infinity limit on a connected
/// network. Throws DisconnectedNetwork listing the components otherwise.
YieldVector stationary_limit(const RateConstantMatrix& K, const YieldVector& p);

/// Connected components of the sparsity pattern, each sorted, ordered by
/// smallest member.
std::vector<std::vector<int>> connected_components(const Laplacian& L);

}  // namespace rcmc

#endif
