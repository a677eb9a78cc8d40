#ifndef RCMC_KINETICS_HPP
#define RCMC_KINETICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rcmc
{

/// Default relative tolerance for detailed balance K_uv pi_v = K_vu pi_u.
inline constexpr double kDetailedBalanceTolerance = 1e-9;

/// Off-diagonal rate K_{row,col} (0-based, row != col) in 1/second.
struct RateTriplet
{
    int row;
    int col;
    double value;
};

/// Undirected edge of a graph Laplacian carrying weight -L_uv > 0 (0-based).
struct WeightedEdge
{
    int u;
    int v;
    double weight;
};

/// Unvalidated rate data: off-diagonal rates plus a stationary distribution.
struct RateData
{
    int n = 0;
    std::vector<RateTriplet> rates;
    std::vector<double> pi;
};

/// Unvalidated Laplacian data: symmetric edge weights plus pi. K = -L Pi^{-1}.
struct LaplacianData
{
    int n = 0;
    std::vector<WeightedEdge> edges;
    std::vector<double> pi;
};

struct Neighbor
{
    int index;
    double weight;  // -L_uv > 0
};

/// Sparse symmetric weighted graph Laplacian. Off-diagonals are stored as
/// positive weights w_uv = -L_uv, sorted by neighbor index; the diagonal is
/// the sum of the incident weights.
class Laplacian
{
public:
    Laplacian() = default;
    Laplacian(int n, std::span<const WeightedEdge> edges);

    int size() const noexcept { return static_cast<int>(adjacency_.size()); }

    std::span<const Neighbor> neighbors(int v) const { return adjacency_[v]; }

    double diagonal(int v) const { return diagonal_[v]; }

    /// L_uv, including the diagonal. O(log deg(u)).
    double entry(int u, int v) const;

    /// -L_uv for u != v, 0 when u and v are not adjacent.
    double weight(int u, int v) const;

    std::size_t edge_count() const noexcept { return edge_count_; }

    Eigen::MatrixXd dense() const;

private:
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> diagonal_;
    std::size_t edge_count_ = 0;
};

/// Validated rate constant matrix. The canonical representation is the
/// symmetric Laplacian L = -K Pi together with pi; K is derived from it and
/// the diagonal of K is never stored.
class RateConstantMatrix
{
public:
    int size() const noexcept { return laplacian_.size(); }

    const std::vector<double>& pi() const noexcept { return pi_; }
    double pi(int v) const { return pi_[v]; }

    const Laplacian& laplacian() const noexcept { return laplacian_; }

    /// K_uv. The diagonal is derived as -sum_{u != v} K_uv.
    double rate(int u, int v) const;

    /// -K_vv = L_vv / pi_v, the total exit rate of v.
    double exit_rate(int v) const;

    Eigen::MatrixXd dense() const;

    friend RateConstantMatrix validate(const RateData&, double);
    friend RateConstantMatrix validate(const LaplacianData&);

private:
    RateConstantMatrix(Laplacian laplacian, std::vector<double> pi);

    Laplacian laplacian_;
    std::vector<double> pi_;
};

/// Checks nonnegative rates, positive pi, symmetric sparsity and detailed
/// balance (relative `tolerance`). L is symmetrized as (L_uv + L_vu) / 2.
/// Zero rates are dropped and diagonal triplets are ignored.
RateConstantMatrix validate(const RateData& data,
                            double tolerance = kDetailedBalanceTolerance);

/// Builds K = -L Pi^{-1} from symmetric edge weights; RCM1-3 hold by
/// construction. Zero-weight edges are dropped.
RateConstantMatrix validate(const LaplacianData& data);

Laplacian to_laplacian(const RateConstantMatrix& K);

/// Nonnegative amounts per state. The total mass is recorded once at
/// construction and never renormalized.
class YieldVector
{
public:
    YieldVector() = default;
    explicit YieldVector(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double total_mass() const noexcept { return total_mass_; }

private:
    std::vector<double> values_;
    double total_mass_ = 0.0;
};

struct SchurComplement
{
    std::vector<int> remaining;  // V \ S in increasing order
    Eigen::MatrixXd matrix;      // indexed like `remaining`
};

/// L_TT - L_TS L_SS^{-1} L_ST by sequential symmetric elimination in the
/// order given. Throws SingularPivot when a pivot diagonal is <= 0.
SchurComplement schur_complement_dense(const Laplacian& L,
                                       std::span<const int> pivots);

/// exp(tK) p through the eigendecomposition of Pi^{-1/2} L Pi^{-1/2}.
/// Oracle for tiny well-conditioned instances only: n <= 50 and a dynamic
/// range of nonzero |K_uv| of at most 1e6, otherwise OracleOutOfRange.
YieldVector exact_solve_small(const RateConstantMatrix& K,
                              const YieldVector& p,
                              double t);

}  // namespace rcmc

#endif
