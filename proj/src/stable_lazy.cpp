#include "rcmc/stable_lazy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "lazy_engine.hpp"
#include "rcmc/errors.hpp"

namespace rcmc
{

SegmentTreeBank::SegmentTreeBank(const Laplacian& L)
  : index_(L.size()), trees_(L.size())
{
    std::vector<double> weights;
    for(int v = 0; v < L.size(); ++v) {
        const auto nbs = L.neighbors(v);
        weights.clear();
        index_[v].reserve(nbs.size());
        for(const auto& nb : nbs) {
            index_[v].push_back(nb.index);
            weights.push_back(nb.weight);
        }
        trees_[v] = NonnegSegmentTree(weights);
    }
}

std::ptrdiff_t SegmentTreeBank::slot(int v, int w) const
{
    const auto& idx = index_[v];
    const auto it   = std::lower_bound(idx.begin(), idx.end(), w);
    if(it != idx.end() && *it == w) {
        return it - idx.begin();
    }
    return -1;
}

double SegmentTreeBank::excluded_sum(int v, int u) const
{
    const auto p = slot(v, u);
    if(p < 0) {
        return trees_[v].total();
    }
    const auto pos = static_cast<std::size_t>(p);
    return trees_[v].sum(0, pos) + trees_[v].sum(pos + 1, trees_[v].size());
}

double SegmentTreeBank::held(int v, int w) const
{
    const auto p = slot(v, w);
    return p < 0 ? 0.0 : trees_[v].leaf(static_cast<std::size_t>(p));
}

void SegmentTreeBank::clear(int v, int w)
{
    const auto p = slot(v, w);
    if(p >= 0) {
        trees_[v].update(static_cast<std::size_t>(p), 0.0);
    }
}

double compressed_entry_L(const SegmentTreeBank& bank, int u, int v)
{
    return -bank.excluded_sum(v, u);
}

double relax_ratio_threshold(double eps)
{
    return eps / (2.0 + eps);
}

StableDiagonal stably_compute_diagonal(int u,
                                       const CholeskyFactor& C,
                                       const SegmentTreeBank& bank,
                                       CompressedRow& row,
                                       std::optional<RelaxGate> relax)
{
    const int done   = C.rank();  // j - 1
    const auto row_u = C.row(u);
    if(static_cast<int>(row_u.size()) < done) {
        throw Error(ErrorKind::PreconditionViolation,
                    "factor row " + std::to_string(u + 1) + " has "
                        + std::to_string(row_u.size()) + " of "
                        + std::to_string(done) + " entries");
    }
    const bool gated = relax && relax->eps > 0.0;
    if(gated
       && (relax->previous == nullptr
           || static_cast<int>(relax->previous->entries.size()) < done)) {
        throw Error(ErrorKind::PreconditionViolation,
                    "previous compressed row is missing entries");
    }
    const double ratio_limit = gated ? relax_ratio_threshold(relax->eps) : 0.0;

    StableDiagonal out{0.0, 0, 0, 0};
    auto& star = row.entries;
    star.resize(done);
    for(int l = 0; l < done; ++l) {
        if(gated) {
            // C^[j,u]_{star,l} = C^[j-1,s^(j-1)]_{star,l} - C_ul when the
            // ratio C_ul / C^[j-1,s^(j-1)]_{star,l} clears the gate.
            const double prev = relax->previous->entries[l];
            const double c_ul = row_u[l];
            const bool allowed =
                prev == 0.0 ? c_ul == 0.0
                            : (c_ul <= 0.0 && c_ul / prev <= ratio_limit);
            if(allowed) {
                star[l] = prev - c_ul;
                ++out.relax_hits;
                continue;
            }
            ++out.relax_misses;
        }
        else if(relax) {
            ++out.relax_misses;
        }

        const int s         = C.pivot(l);
        const double l_star = compressed_entry_L(bank, u, s);
        const auto row_s    = C.row(s);
        const double dot    = prefix_dot(star, row_s, l);
        out.inner_product_dim += l;
        assert(l_star <= 0.0 && dot >= 0.0);
        const double pivot = C.pivot_value(l);
        if(pivot == 0.0) {
            throw Error(ErrorKind::ZeroPivotColumn,
                        "column " + std::to_string(l + 1) + " has zero pivot");
        }
        star[l] = (l_star - dot) / pivot;
    }

    const double dot = prefix_dot(star, row_u, done);
    out.inner_product_dim += done;
    const double l_star = compressed_entry_L(bank, u, u);
    assert(l_star <= 0.0 && dot >= 0.0);
    out.value = dot - l_star;
    return out;
}

namespace
{

class StableRefresh
{
public:
    StableRefresh(const RateConstantMatrix& K, const StableOptions& options)
      : L_(K.laplacian()),
        bank_(L_),
        in_s_(K.size(), 0),
        options_(options)
    {}

    double refresh(int u,
                   int old_b,
                   int j,
                   const CholeskyFactor& C,
                   double,
                   InstrumentationCounters& cnt)
    {
        for(int l = old_b; l <= j - 2; ++l) {
            bank_.clear(u, C.pivot(l));
        }
        if(options_.audit) {
            audit(C, cnt, u, j);
        }
        std::optional<RelaxGate> gate;
        if(options_.eps_relax) {
            gate = RelaxGate{*options_.eps_relax, &previous_};
        }
        const auto r = stably_compute_diagonal(u, C, bank_, current_, gate);
        cnt.m_diag += r.inner_product_dim;
        cnt.relax_hits += r.relax_hits;
        cnt.relax_misses += r.relax_misses;
        return r.value;
    }

    void on_accept(int s, int j, const CholeskyFactor& C)
    {
        for(const auto& nb : L_.neighbors(s)) {
            if(in_s_[nb.index]) {
                bank_.clear(nb.index, s);
            }
        }
        in_s_[s] = 1;
        // The row computed for s at this iteration covers columns 1..j-1;
        // column j aggregates C_vj over T^(j), which equals -C_{s j} because
        // the Schur complement L^(j-1) has zero column sums.
        previous_ = current_;
        previous_.entries.push_back(-C.pivot_value(j - 1));
    }

private:
    // Exact leaf-level check of the bank invariant at iteration j, after the
    // slots of state u have been advanced to b_u = j - 1.
    void audit(const CholeskyFactor& C,
               const InstrumentationCounters& cnt,
               int u,
               int j) const
    {
        const int n = L_.size();
        std::vector<int> position(n, -1);
        for(int l = 0; l < C.rank(); ++l) {
            position[C.pivot(l)] = l;
        }
        for(int v = 0; v < n; ++v) {
            // Rows already dropped from column v: S^(j-1) for pivots, S^(b_v)
            // for transient states.
            const int cut = in_s_[v] ? j - 1
                                     : static_cast<int>(v == u ? j - 1
                                                               : cnt.b[v]);
            for(const auto& nb : L_.neighbors(v)) {
                const bool dropped =
                    position[nb.index] >= 0 && position[nb.index] < cut;
                const double expect = dropped ? 0.0 : nb.weight;
                if(bank_.held(v, nb.index) != expect) {
                    throw Error(ErrorKind::BankInvariantViolation,
                                "column " + std::to_string(v + 1) + " row "
                                    + std::to_string(nb.index + 1)
                                    + " holds a stale value at iteration "
                                    + std::to_string(j));
                }
            }
        }
    }

    const Laplacian& L_;
    SegmentTreeBank bank_;
    std::vector<char> in_s_;
    StableOptions options_;
    CompressedRow current_;
    CompressedRow previous_;
};

}  // namespace

LazyResult stable_lazy_fast_greedy(const RateConstantMatrix& K,
                                   double t_max,
                                   const StableOptions& options)
{
    if(options.eps_relax && !(*options.eps_relax >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps_relax must be >= 0");
    }
    StableRefresh policy(K, options);
    return detail::run_lazy(K, t_max, policy);
}

SubtractionVerdict subtraction_error_bound(double a_hat,
                                           double b_hat,
                                           double e,
                                           double eps)
{
    if(!(std::abs(a_hat) > std::abs(b_hat))) {
        throw Error(ErrorKind::PreconditionViolation, "|a_hat| <= |b_hat|");
    }
    if(b_hat != 0.0 && std::signbit(a_hat) != std::signbit(b_hat)) {
        throw Error(ErrorKind::PreconditionViolation,
                    "operands have different signs");
    }
    if(!(e >= 0.0) || !(eps >= 0.0) || (e > 0.0 && eps > 1.0 / e - 1.0)) {
        throw Error(ErrorKind::PreconditionViolation,
                    "eps outside [0, 1/e - 1]");
    }
    const double ratio = b_hat / a_hat;
    if(ratio <= relax_ratio_threshold(eps)) {
        return {SubtractionDecision::Allow, (1.0 + eps) * e};
    }
    return {SubtractionDecision::Deny, 0.0};
}

}  // namespace rcmc
