#include "rcmc/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "rcmc/cholesky.hpp"
#include "rcmc/errors.hpp"

namespace rcmc
{

namespace
{

// Dense working copy of K^(j) kept in pivot-permuted order so that the
// transient block is always the trailing block [j, n). Off-diagonals are the
// nonnegative K^(j)_uv; the diagonal is stored separately as the exit rate
// -K^(j)_vv, so every stored number is nonnegative.
class DenseEliminator
{
public:
    explicit DenseEliminator(const RateConstantMatrix& K)
      : K_(K),
        n_(K.size()),
        rates_(Eigen::MatrixXd::Zero(n_, n_)),
        exit_(n_, 0.0),
        order_(n_)
    {
        std::iota(order_.begin(), order_.end(), 0);
        const auto& L = K.laplacian();
        for(int v = 0; v < n_; ++v) {
            for(const auto& nb : L.neighbors(v)) {
                rates_(nb.index, v) = nb.weight / K.pi(v);
            }
            refresh_exit(0, v);
        }
    }

    int size() const noexcept { return n_; }

    // Position in [j, n) holding the largest exit rate; ties go to the
    // smallest original state.
    int argmax(int j) const
    {
        int best = j;
        for(int p = j + 1; p < n_; ++p) {
            if(exit_[p] > exit_[best]
               || (exit_[p] == exit_[best] && order_[p] < order_[best])) {
                best = p;
            }
        }
        return best;
    }

    double exit_rate(int p) const { return exit_[p]; }
    int state(int p) const { return order_[p]; }

    // Moves the pivot to position j and eliminates it. When `factor` is
    // given, appends column j of the Cholesky factor of L = -K Pi:
    // C_uj = -K^(j-1)_us sqrt(pi_s / |K^(j-1)_ss|).
    void eliminate(int j, int pivot_pos, CholeskyFactor* factor)
    {
        swap_positions(j, pivot_pos);
        const double d = exit_[j];
        const Eigen::Index tail = n_ - j - 1;
        if(factor) {
            const double pi_s = K_.pi(order_[j]);
            const double unit = std::sqrt(pi_s / d);
            for(int p = j + 1; p < n_; ++p) {
                factor->append(order_[p], -rates_(p, j) * unit);
            }
            factor->append_pivot(order_[j], std::sqrt(d * pi_s));
        }
        // K^(j)_uc = K_uc + (K_us K_sc) / |K_ss|. Forming the product first
        // keeps a symmetric K^(j) (pi = 1) bitwise symmetric, so exact ties
        // stay ties and go to the smallest index.
        const double inv_d = 1.0 / d;
        for(int c = j + 1; c < n_; ++c) {
            const double k_sc = rates_(j, c);
            if(k_sc == 0.0) {
                continue;
            }
            rates_.col(c).tail(tail) += (rates_.col(j).tail(tail) * k_sc) * inv_d;
            rates_(c, c) = 0.0;
            refresh_exit(j + 1, c);
        }
    }

    Eigen::MatrixXd minus_k(int j, std::vector<int>& remaining) const
    {
        remaining.assign(order_.begin() + j, order_.end());
        std::vector<int> pos(remaining.size());
        std::iota(pos.begin(), pos.end(), j);
        std::sort(pos.begin(), pos.end(),
                  [&](int a, int b) { return order_[a] < order_[b]; });
        std::sort(remaining.begin(), remaining.end());
        const auto m = static_cast<Eigen::Index>(remaining.size());
        Eigen::MatrixXd out(m, m);
        for(Eigen::Index a = 0; a < m; ++a) {
            for(Eigen::Index b = 0; b < m; ++b) {
                out(a, b) = a == b ? exit_[pos[a]] : -rates_(pos[a], pos[b]);
            }
        }
        return out;
    }

private:
    // -K^(j)_cc = sum_{u in T, u != c} K^(j)_uc with K^(j)_cc held at 0.
    void refresh_exit(int j, int c)
    {
        exit_[c] = rates_.col(c).tail(n_ - j).sum();
    }

    void swap_positions(int a, int b)
    {
        if(a == b) {
            return;
        }
        rates_.row(a).swap(rates_.row(b));
        rates_.col(a).swap(rates_.col(b));
        std::swap(exit_[a], exit_[b]);
        std::swap(order_[a], order_[b]);
    }

    const RateConstantMatrix& K_;
    int n_;
    Eigen::MatrixXd rates_;
    std::vector<double> exit_;
    std::vector<int> order_;
};

GreedyResult run_greedy(const RateConstantMatrix& K,
                        double t_max,
                        const GreedyObserver& observer,
                        CholeskyFactor* factor)
{
    if(!(t_max > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "t_max must be positive");
    }
    const double threshold = 1.0 / t_max;
    DenseEliminator work(K);
    GreedyResult result;
    std::vector<int> remaining;

    for(int j = 0; j < work.size(); ++j) {
        const int p     = work.argmax(j);
        const double d  = work.exit_rate(p);
        if(d < threshold) {
            result.stop_diagonal = d;
            break;
        }
        result.pivots.push_back(work.state(p));
        result.pivot_diagonals.push_back(d);
        work.eliminate(j, p, factor);
        if(observer) {
            const Eigen::MatrixXd m = work.minus_k(j + 1, remaining);
            observer(GreedySnapshot{j + 1, remaining, m});
        }
    }
    return result;
}

}  // namespace

GreedyResult greedy(const RateConstantMatrix& K,
                    double t_max,
                    const GreedyObserver& observer)
{
    return run_greedy(K, t_max, observer, nullptr);
}

std::pair<GreedyResult, CholeskyFactor> greedy_factorized(
    const RateConstantMatrix& K,
    double t_max)
{
    CholeskyFactor factor(K.size());
    auto result = run_greedy(K, t_max, {}, &factor);
    return {std::move(result), std::move(factor)};
}

namespace
{

// log det of L_XX; -inf when FullPivLU declares the minor singular.
double log_det_laplacian_minor(const Laplacian& L, std::span<const int> X)
{
    const auto m = static_cast<Eigen::Index>(X.size());
    if(m == 0) {
        return 0.0;
    }
    Eigen::MatrixXd minor(m, m);
    for(Eigen::Index a = 0; a < m; ++a) {
        for(Eigen::Index b = 0; b < m; ++b) {
            minor(a, b) = L.entry(X[a], X[b]);
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(minor);
    if(!lu.isInvertible()) {
        return -std::numeric_limits<double>::infinity();
    }
    const auto& packed = lu.matrixLU();
    double log_abs = 0.0;
    for(Eigen::Index i = 0; i < m; ++i) {
        log_abs += std::log(std::abs(packed(i, i)));
    }
    return log_abs;
}

}  // namespace

double marginal_gain_logdet(const RateConstantMatrix& K,
                            std::span<const int> S,
                            int v)
{
    const int n = K.size();
    if(v < 0 || v >= n) {
        throw Error(ErrorKind::InvalidArgument, "state out of range");
    }
    for(const int s : S) {
        if(s < 0 || s >= n) {
            throw Error(ErrorKind::InvalidArgument, "prefix state out of range");
        }
        if(s == v) {
            throw Error(ErrorKind::InvalidArgument,
                        "state " + std::to_string(v + 1) + " already in S");
        }
    }
    const auto& L = K.laplacian();
    const double base = log_det_laplacian_minor(L, S);
    if(base == -std::numeric_limits<double>::infinity()) {
        throw Error(ErrorKind::SingularPrefix, "det(-K)_SS = 0");
    }
    std::vector<int> X(S.begin(), S.end());
    X.push_back(v);
    const double augmented = log_det_laplacian_minor(L, X);
    if(augmented == -std::numeric_limits<double>::infinity()) {
        return augmented;
    }
    // det(-K)_XX = det(L_XX) / prod_{x in X} pi_x
    return augmented - base - std::log(K.pi(v));
}

}  // namespace rcmc
