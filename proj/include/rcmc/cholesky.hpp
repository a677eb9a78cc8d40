#ifndef RCMC_CHOLESKY_HPP
#define RCMC_CHOLESKY_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rcmc/greedy.hpp"
#include "rcmc/kinetics.hpp"

namespace rcmc
{

/// Column-wise (partial) pivoted Cholesky factor C of a PSD matrix, stored
/// by rows. Row u holds C_{u,1..len(u)}; every entry past the stored prefix
/// is an unassigned zero. The row of the j-th pivot ends with C_{s^(j) j}.
class CholeskyFactor
{
public:
    CholeskyFactor() = default;
    explicit CholeskyFactor(int n) : rows_(n) {}

    int size() const noexcept { return static_cast<int>(rows_.size()); }
    int rank() const noexcept { return static_cast<int>(pivots_.size()); }

    std::span<const int> pivots() const noexcept { return pivots_; }
    int pivot(int j) const { return pivots_[j]; }

    /// C_{s^(j) j} with 0-based column j.
    double pivot_value(int j) const { return rows_[pivots_[j]][j]; }

    std::span<const double> row(int u) const noexcept { return rows_[u]; }

    /// C_{u l} (0-based), zero when unassigned.
    double operator()(int u, int l) const
    {
        const auto& r = rows_[u];
        return l < static_cast<int>(r.size()) ? r[l] : 0.0;
    }

    Eigen::VectorXd column(int l) const;
    Eigen::MatrixXd dense() const;

    /// Appends C_{u, len(u)}.
    void append(int u, double value) { rows_[u].push_back(value); }

    /// Appends the diagonal entry of the next pivot column.
    void append_pivot(int s, double value)
    {
        rows_[s].push_back(value);
        pivots_.push_back(s);
    }

    void reserve_row(int u, std::size_t n) { rows_[u].reserve(n); }

private:
    std::vector<std::vector<double>> rows_;
    std::vector<int> pivots_;
};

/// Inner product of the first `len` entries of two factor rows. The
/// summation order is unspecified (vectorized); callers only use it on
/// like-signed products.
inline double prefix_dot(std::span<const double> a,
                         std::span<const double> b,
                         std::size_t len)
{
    using Vec = Eigen::Map<const Eigen::VectorXd>;
    const auto m = static_cast<Eigen::Index>(len);
    return Vec(a.data(), m).dot(Vec(b.data(), m));
}

struct CholeskyStats
{
    std::int64_t clamp_events = 0;
};

/// Pivoted Gaussian elimination keeping the dense Schur complement. Stops at
/// the first maximum remaining diagonal below `eps` (or <= 0 when eps = 0).
CholeskyFactor gaussian_cholesky(const Eigen::MatrixXd& L, double eps);

/// Pivoted Doolittle factorization keeping only the diagonal vector d.
/// Computes the same pivots and entries as gaussian_cholesky.
CholeskyFactor doolittle_cholesky(const Eigen::MatrixXd& L,
                                  double eps,
                                  CholeskyStats* stats = nullptr);

/// Doolittle on L = -K Pi pivoting on d_v / pi_v and stopping when the
/// selected ratio is below 1/t_max. Same pivots as greedy().
std::pair<GreedyResult, CholeskyFactor> fast_greedy(
    const RateConstantMatrix& K,
    double t_max,
    CholeskyStats* stats = nullptr);

/// greedy() that also records the Cholesky factor of L = -K Pi implied by
/// its eliminations, for the projection step.
std::pair<GreedyResult, CholeskyFactor> greedy_factorized(
    const RateConstantMatrix& K,
    double t_max);

}  // namespace rcmc

#endif
