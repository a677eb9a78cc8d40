#include "rcmc/lazy_fast.hpp"

#include "lazy_engine.hpp"

namespace rcmc
{

namespace
{

struct SubtractiveRefresh
{
    double refresh(int u,
                   int old_b,
                   int j,
                   const CholeskyFactor& C,
                   double snapshot,
                   InstrumentationCounters&)
    {
        const auto row = C.row(u);
        double drop    = 0.0;
        for(int l = old_b; l <= j - 2; ++l) {
            drop += row[l] * row[l];
        }
        return snapshot - drop;
    }

    void on_accept(int, int, const CholeskyFactor&) {}
};

}  // namespace

LazyResult lazy_fast_greedy(const RateConstantMatrix& K, double t_max)
{
    SubtractiveRefresh policy;
    return detail::run_lazy(K, t_max, policy);
}

}  // namespace rcmc
