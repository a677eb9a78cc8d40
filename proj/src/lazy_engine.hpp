#ifndef RCMC_LAZY_ENGINE_HPP
#define RCMC_LAZY_ENGINE_HPP

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "rcmc/errors.hpp"
#include "rcmc/lazy_fast.hpp"

namespace rcmc::detail
{

struct HeapItem
{
    double rho;
    int v;
};

// Max-heap order on (rho, -v): equal bounds pop the smaller state first.
struct HeapLess
{
    bool operator()(const HeapItem& a, const HeapItem& b) const
    {
        return a.rho < b.rho || (a.rho == b.rho && a.v > b.v);
    }
};

// Control flow shared by the lazy, stable and relaxed methods. The policy
// supplies the diagonal refresh:
//   double refresh(int u, int old_b, int j, const CholeskyFactor&,
//                  double snapshot, InstrumentationCounters&)
//   void on_accept(int s, int j, const CholeskyFactor&)
// Iteration indices j are 1-based as in the counters; factor columns are
// 0-based, so iteration j sees columns 0..j-2.
//
// Every state sits in the heap exactly once until accepted: the popped state
// is either accepted or pushed back with its refreshed key, so no entry ever
// goes stale.
template<class Policy>
LazyResult run_lazy(const RateConstantMatrix& K, double t_max, Policy& policy)
{
    if(!(t_max > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "t_max must be positive");
    }
    const int n            = K.size();
    const auto& L          = K.laplacian();
    const double threshold = 1.0 / t_max;

    LazyResult out{{}, CholeskyFactor(n), {}};
    auto& C   = out.factor;
    auto& cnt = out.counters;
    cnt.b.assign(n, 0);

    std::vector<double> snapshot(n);
    std::vector<HeapItem> items;
    items.reserve(n);
    for(int v = 0; v < n; ++v) {
        snapshot[v] = L.diagonal(v);
        items.push_back({snapshot[v] / K.pi(v), v});
    }
    std::priority_queue<HeapItem, std::vector<HeapItem>, HeapLess> heap(
        HeapLess{}, std::move(items));

    int j = 1;
    while(!heap.empty()) {
        const int u = heap.top().v;
        heap.pop();
        ++cnt.heap_pops;
        if(static_cast<int>(cnt.c.size()) < j) {
            cnt.c.push_back(0);
        }
        ++cnt.c[j - 1];

        const int old_b = static_cast<int>(cnt.b[u]);
        for(int l = old_b; l <= j - 2; ++l) {
            const int s    = C.pivot(l);
            const auto r_u = C.row(u);
            const auto r_s = C.row(s);
            const double dot = prefix_dot(r_u, r_s, l);
            cnt.m_offdiag += l;
            // (nonpositive) - (nonnegative): no like-sign cancellation
            C.append(u, (-L.weight(u, s) - dot) / C.pivot_value(l));
        }

        double d = policy.refresh(u, old_b, j, C, snapshot[u], cnt);
        if(d < 0.0) {
            d = 0.0;
            ++cnt.clamp_events;
        }
        cnt.b[u]       = j - 1;
        snapshot[u]    = d;
        const double r = d / K.pi(u);

        if(heap.empty() || !HeapLess{}(HeapItem{r, u}, heap.top())) {
            if(r < threshold) {
                out.result.stop_diagonal = r;
                break;
            }
            out.result.pivots.push_back(u);
            out.result.pivot_diagonals.push_back(r);
            C.append_pivot(u, std::sqrt(d));
            policy.on_accept(u, j, C);
            ++j;
        }
        else {
            heap.push({r, u});
        }
    }
    return out;
}

}  // namespace rcmc::detail

#endif
