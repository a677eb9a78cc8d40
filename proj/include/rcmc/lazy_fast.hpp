#ifndef RCMC_LAZY_FAST_HPP
#define RCMC_LAZY_FAST_HPP

#include "rcmc/cholesky.hpp"
#include "rcmc/counters.hpp"
#include "rcmc/greedy.hpp"
#include "rcmc/kinetics.hpp"

namespace rcmc
{

/// Output of a lazy selection run. The factor is partial: row v holds
/// C_{v,1..b_v} for transient v and C_{s^(j),1..j} for pivots.
struct LazyResult
{
    GreedyResult result;
    CholeskyFactor factor;
    InstrumentationCounters counters;
};

/// Lazy greedy over stale upper bounds rho_v = d_v^(b_v) / pi_v kept in a
/// max-heap (ties pop the smaller index). A popped state has its missing
/// factor entries completed and its diagonal refreshed by
/// d_u^(b_u) - sum_l C_ul^2. That subtraction combines like-sign numbers and
/// is left unstabilized here on purpose; see stable_lazy_fast_greedy.
LazyResult lazy_fast_greedy(const RateConstantMatrix& K, double t_max);

}  // namespace rcmc

#endif
