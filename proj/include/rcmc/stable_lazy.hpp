#ifndef RCMC_STABLE_LAZY_HPP
#define RCMC_STABLE_LAZY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcmc/cholesky.hpp"
#include "rcmc/kinetics.hpp"
#include "rcmc/lazy_fast.hpp"
#include "rcmc/segment_tree.hpp"

namespace rcmc
{

/// Default tolerance of the relaxing heuristic.
inline constexpr double kDefaultRelaxEps = 1e-16;

/// One sparse segment tree per Laplacian column v, with a leaf for every
/// neighbor w of v holding -L_wv >= 0. Leaves are zeroed as states leave
/// the aggregation, so a column's total is always a plain nonnegative sum.
class SegmentTreeBank
{
public:
    SegmentTreeBank() = default;
    explicit SegmentTreeBank(const Laplacian& L);

    int size() const noexcept { return static_cast<int>(trees_.size()); }

    /// Sum of the live magnitudes of column v, leaving out row u.
    double excluded_sum(int v, int u) const;
    double total(int v) const { return trees_[v].total(); }

    /// Current magnitude held for row w of column v (0 when w is not a
    /// neighbor of v).
    double held(int v, int w) const;

    /// Zeroes the slot of row w in column v; a no-op for non-neighbors.
    void clear(int v, int w);

private:
    std::ptrdiff_t slot(int v, int w) const;

    std::vector<std::vector<int>> index_;  // sorted neighbor rows per column
    std::vector<NonnegSegmentTree> trees_;
};

/// Row star of the compressed factor: entries C^[j,u]_{star,l} <= 0 for
/// l = 1..j-1.
struct CompressedRow
{
    std::vector<double> entries;
};

/// L^[j,u]_{star,v} = sum over the current transient set minus u of L_wv,
/// read from two range queries of column v. Requires the bank invariant
/// for the current iteration.
double compressed_entry_L(const SegmentTreeBank& bank, int u, int v);

/// Relaxing gate: the compressed row cached at the previous accepted pivot
/// and the tolerance eps. eps = 0 closes the gate.
struct RelaxGate
{
    double eps;
    const CompressedRow* previous;
};

struct StableDiagonal
{
    double value;                     // d_u^(j-1) >= 0
    std::int64_t inner_product_dim;   // contribution to M_diag
    std::int64_t relax_hits;
    std::int64_t relax_misses;
};

/// Computes d_u^(j-1) with j - 1 = C.rank() through the compressed
/// Laplacian. Every subtraction combines a nonpositive and a nonnegative
/// operand, except relaxed entries C^[j-1,s]_{star,l} - C_ul which are
/// admitted only when the ratio gate passes. Writes the compressed row
/// into `row`.
StableDiagonal stably_compute_diagonal(int u,
                                       const CholeskyFactor& C,
                                       const SegmentTreeBank& bank,
                                       CompressedRow& row,
                                       std::optional<RelaxGate> relax = {});

struct StableOptions
{
    /// Absent: StableLazyFastGreedy. Present: the relaxed variant.
    std::optional<double> eps_relax;
    /// Re-verify the segment-tree bank after every while iteration
    /// (O(nnz) per iteration, for tests). Throws BankInvariantViolation.
    bool audit = false;
};

/// Lazy greedy with the diagonal refresh replaced by
/// stably_compute_diagonal. Records M_diag and relax hit/miss counts.
LazyResult stable_lazy_fast_greedy(const RateConstantMatrix& K,
                                   double t_max,
                                   const StableOptions& options = {});

enum class SubtractionDecision
{
    Allow,
    Deny,
};

struct SubtractionVerdict
{
    SubtractionDecision decision;
    double bound;  // (1 + eps) e when allowed
};

/// eps / (2 + eps).
double relax_ratio_threshold(double eps);

/// Relative-error gate for a_hat - b_hat with same-sign operands carrying
/// relative errors at most e: allowed when |b_hat| / |a_hat| <=
/// eps / (2 + eps), in which case the result's relative error is at most
/// (1 + eps) e. Throws PreconditionViolation when |a_hat| <= |b_hat|, the
/// signs differ, or eps lies outside [0, 1/e - 1].
SubtractionVerdict subtraction_error_bound(double a_hat,
                                           double b_hat,
                                           double e,
                                           double eps);

}  // namespace rcmc

#endif
