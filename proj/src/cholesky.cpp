#include "rcmc/cholesky.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "rcmc/errors.hpp"

namespace rcmc
{

Eigen::VectorXd CholeskyFactor::column(int l) const
{
    Eigen::VectorXd out(size());
    for(int u = 0; u < size(); ++u) {
        out(u) = (*this)(u, l);
    }
    return out;
}

Eigen::MatrixXd CholeskyFactor::dense() const
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), rank());
    for(int u = 0; u < size(); ++u) {
        const auto r = row(u);
        for(int l = 0; l < static_cast<int>(r.size()) && l < rank(); ++l) {
            out(u, l) = r[l];
        }
    }
    return out;
}

namespace
{

bool stops(double key, double threshold)
{
    return key < threshold || (threshold == 0.0 && key <= 0.0);
}

double max_abs(const Eigen::MatrixXd& L)
{
    return L.size() == 0 ? 0.0 : L.cwiseAbs().maxCoeff();
}

void check_square(const Eigen::MatrixXd& L)
{
    if(L.rows() != L.cols()) {
        throw Error(ErrorKind::InvalidArgument, "matrix is not square");
    }
}

void check_eps(double eps)
{
    if(!(eps >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps must be >= 0");
    }
}

[[noreturn]] void negative_diagonal(int v, double value)
{
    throw Error(ErrorKind::NegativeDiagonal,
                "remaining diagonal of row " + std::to_string(v + 1) + " is "
                    + std::to_string(value));
}

// Relative size below which a remaining diagonal of a general PSD matrix is
// cancellation noise of an exact zero.
double flush_factor(Eigen::Index n)
{
    return static_cast<double>(std::max<Eigen::Index>(n, 2)) * DBL_EPSILON;
}

// Shared pivoted Doolittle loop. `scale` divides d_v for the pivot key and
// `entry(u, s)` returns L_us for u != s. Diagonals at most `flush` times their
// initial value are set to zero.
template<class Entry>
std::pair<GreedyResult, CholeskyFactor> doolittle_core(
    std::vector<double> d,
    const std::vector<double>& scale,
    double threshold,
    double negative_floor,
    bool throw_on_negative,
    double flush,
    Entry&& entry,
    CholeskyStats* stats)
{
    const int n = static_cast<int>(d.size());
    const std::vector<double> initial = d;
    CholeskyFactor C(n);
    GreedyResult result;
    std::vector<int> transient(n);
    for(int v = 0; v < n; ++v) {
        transient[v] = v;
    }

    for(int j = 0; j < n; ++j) {
        auto best = transient.begin();
        for(auto it = transient.begin(); it != transient.end(); ++it) {
            const double key  = d[*it] / scale[*it];
            const double top  = d[*best] / scale[*best];
            if(key > top || (key == top && *it < *best)) {
                best = it;
            }
        }
        const int s      = *best;
        const double key = d[s] / scale[s];
        if(stops(key, threshold)) {
            result.stop_diagonal = key;
            break;
        }
        transient.erase(best);
        result.pivots.push_back(s);
        result.pivot_diagonals.push_back(key);

        const double c_ss = std::sqrt(d[s]);
        C.append_pivot(s, c_ss);
        const auto row_s = C.row(s);
        for(const int u : transient) {
            const auto row_u = C.row(u);
            const double dot = prefix_dot(row_u, row_s, j);
            const double c_uj = (entry(u, s) - dot) / c_ss;
            C.append(u, c_uj);
            d[u] -= c_uj * c_uj;
            if(d[u] < 0.0) {
                if(throw_on_negative && d[u] < negative_floor) {
                    negative_diagonal(u, d[u]);
                }
                d[u] = 0.0;
                if(stats) {
                    ++stats->clamp_events;
                }
            }
            else if(d[u] <= flush * initial[u]) {
                d[u] = 0.0;
            }
        }
    }
    return {std::move(result), std::move(C)};
}

}  // namespace

CholeskyFactor gaussian_cholesky(const Eigen::MatrixXd& L, double eps)
{
    check_square(L);
    check_eps(eps);
    const int n            = static_cast<int>(L.rows());
    const double floor_neg = -1e-12 * max_abs(L);
    const double flush     = flush_factor(n);
    Eigen::MatrixXd work   = L;
    CholeskyFactor C(n);
    std::vector<char> eliminated(n, 0);

    for(int j = 0; j < n; ++j) {
        int s = -1;
        for(int v = 0; v < n; ++v) {
            if(eliminated[v]) {
                continue;
            }
            if(work(v, v) < floor_neg) {
                negative_diagonal(v, work(v, v));
            }
            if(s < 0 || work(v, v) > work(s, s)) {
                s = v;
            }
        }
        if(s < 0 || stops(work(s, s), eps)) {
            break;
        }
        eliminated[s]     = 1;
        const double pivot = work(s, s);
        const double c_ss  = std::sqrt(pivot);
        C.append_pivot(s, c_ss);
        for(int u = 0; u < n; ++u) {
            if(!eliminated[u]) {
                C.append(u, work(u, s) / c_ss);
            }
        }
        for(int v = 0; v < n; ++v) {
            if(eliminated[v] || work(s, v) == 0.0) {
                continue;
            }
            const double f = work(s, v) / pivot;
            for(int u = 0; u < n; ++u) {
                if(!eliminated[u]) {
                    work(u, v) -= work(u, s) * f;
                }
            }
        }
        for(int v = 0; v < n; ++v) {
            if(!eliminated[v] && work(v, v) >= 0.0 && work(v, v) <= flush * L(v, v)) {
                work(v, v) = 0.0;
            }
        }
    }
    return C;
}

CholeskyFactor doolittle_cholesky(const Eigen::MatrixXd& L,
                                  double eps,
                                  CholeskyStats* stats)
{
    check_square(L);
    check_eps(eps);
    const int n = static_cast<int>(L.rows());
    std::vector<double> d(n);
    for(int v = 0; v < n; ++v) {
        d[v] = L(v, v);
        if(d[v] < -1e-12 * max_abs(L)) {
            negative_diagonal(v, d[v]);
        }
    }
    const std::vector<double> ones(n, 1.0);
    auto [result, C] = doolittle_core(
        std::move(d), ones, eps, -1e-12 * max_abs(L), true, flush_factor(n),
        [&](int u, int s) { return L(u, s); }, stats);
    return std::move(C);
}

std::pair<GreedyResult, CholeskyFactor> fast_greedy(const RateConstantMatrix& K,
                                                    double t_max,
                                                    CholeskyStats* stats)
{
    if(!(t_max > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "t_max must be positive");
    }
    const auto& L = K.laplacian();
    std::vector<double> d(K.size());
    for(int v = 0; v < K.size(); ++v) {
        d[v] = L.diagonal(v);
    }
    return doolittle_core(
        std::move(d), K.pi(), 1.0 / t_max, 0.0, false, 0.0,
        [&](int u, int s) { return -L.weight(u, s); }, stats);
}

}  // namespace rcmc
