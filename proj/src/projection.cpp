#include "rcmc/projection.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "rcmc/errors.hpp"

namespace rcmc
{

namespace
{

// Triangular pivot block G = C_{S,J} of the factor, lower triangular with
// positive diagonal and nonpositive off-diagonals. Rows are read straight
// from the factor; columns are copied once for the transposed solves.
class PivotBlock
{
public:
    PivotBlock(const CholeskyFactor& C, int k) : C_(C), columns_(k)
    {
        for(int l = 0; l < k; ++l) {
            columns_[l].reserve(k - l);
            for(int m = l; m < k; ++m) {
                columns_[l].push_back(C(C.pivot(m), l));
            }
        }
    }

    // Extends z = G^{-1} b by entry l, given z_0..z_{l-1}.
    double forward_entry(int l, double b_l, const std::vector<double>& z) const
    {
        const auto row = C_.row(C_.pivot(l));
        double acc     = b_l;
        for(int m = 0; m < l; ++m) {
            acc += -row[m] * z[m];
        }
        return acc / row[l];
    }

    // x = G_j^{-T} z on the leading j x j block.
    void backward(int j, const std::vector<double>& z, std::vector<double>& x) const
    {
        x.assign(j, 0.0);
        for(int l = j - 1; l >= 0; --l) {
            const auto& col = columns_[l];
            double acc      = z[l];
            for(int m = l + 1; m < j; ++m) {
                acc += -col[m - l] * x[m];
            }
            x[l] = acc / col[0];
        }
    }

    // x = L_SS^{-1} b on the leading j x j block, b given in pivot order.
    void solve(int j, const std::vector<double>& b, std::vector<double>& x) const
    {
        std::vector<double> z;
        z.reserve(j);
        for(int l = 0; l < j; ++l) {
            z.push_back(forward_entry(l, b[l], z));
        }
        backward(j, z, x);
    }

private:
    const CholeskyFactor& C_;
    std::vector<std::vector<double>> columns_;
};

void check_compatible(const GreedyResult& result,
                      const CholeskyFactor& factor,
                      int n,
                      std::size_t p_size)
{
    if(factor.size() != n || static_cast<int>(p_size) != n) {
        throw Error(ErrorKind::IncompatibleFactor, "dimension mismatch");
    }
    if(factor.rank() < result.k()) {
        throw Error(ErrorKind::IncompatibleFactor,
                    "factor has " + std::to_string(factor.rank())
                        + " columns for " + std::to_string(result.k())
                        + " pivots");
    }
    for(int l = 0; l < result.k(); ++l) {
        if(factor.pivot(l) != result.pivots[l]) {
            throw Error(ErrorKind::IncompatibleFactor,
                        "pivot " + std::to_string(l + 1) + " differs");
        }
        if(static_cast<int>(factor.row(result.pivots[l]).size()) < l + 1) {
            throw Error(ErrorKind::IncompatibleFactor,
                        "pivot row " + std::to_string(l + 1) + " incomplete");
        }
    }
}

}  // namespace

Trajectory project(const RateConstantMatrix& K,
                   const GreedyResult& result,
                   const CholeskyFactor& factor,
                   const YieldVector& p,
                   TrajectoryMode mode)
{
    using clock = std::chrono::steady_clock;
    const int n = K.size();
    const int k = result.k();
    check_compatible(result, factor, n, p.size());

    const auto& L = K.laplacian();
    const PivotBlock G(factor, k);

    std::vector<int> position(n, -1);
    std::vector<double> p_s(k);
    std::vector<double> pi_s(k);
    for(int l = 0; l < k; ++l) {
        const int s = result.pivots[l];
        position[s] = l;
        p_s[l]      = p[s];
        pi_s[l]     = K.pi(s);
    }

    Trajectory out;
    out.mode = mode;
    // Prefix forward solves G^{-1} p_S and G^{-1} pi_S grow by one entry per
    // iteration and are shared by every j.
    std::vector<double> zp;
    std::vector<double> zpi;
    std::vector<double> xp;
    std::vector<double> xpi;
    std::vector<double> h;
    std::vector<double> g;
    const int first = mode == TrajectoryMode::full ? 1 : k;

    for(int j = 1; j <= k; ++j) {
        const auto started = clock::now();
        zp.push_back(G.forward_entry(j - 1, p_s[j - 1], zp));
        zpi.push_back(G.forward_entry(j - 1, pi_s[j - 1], zpi));
        if(j < first) {
            continue;
        }
        // membership in S^(j): position < j
        G.backward(j, zp, xp);
        G.backward(j, zpi, xpi);

        TrajectoryPoint point;
        point.j    = j;
        point.time = 1.0 / result.pivot_diagonals[j - 1];
        point.q.assign(n, 0.0);
        for(int v = 0; v < n; ++v) {
            if(position[v] >= 0 && position[v] < j) {
                continue;
            }
            double y      = p[v];
            double inflow = 0.0;
            for(const auto& nb : L.neighbors(v)) {
                const int l = position[nb.index];
                if(l >= 0 && l < j) {
                    y += nb.weight * xp[l];
                    inflow += nb.weight * xpi[l];
                }
            }
            point.q[v] = y / (1.0 + inflow / K.pi(v));
        }

        h.assign(j, 0.0);
        for(int l = 0; l < j; ++l) {
            const int s = result.pivots[l];
            double acc  = 0.0;
            for(const auto& nb : L.neighbors(s)) {
                const int m = position[nb.index];
                if(m < 0 || m >= j) {
                    acc += nb.weight * (point.q[nb.index] / K.pi(nb.index));
                }
            }
            h[l] = acc;
        }
        G.solve(j, h, g);
        for(int l = 0; l < j; ++l) {
            point.q[result.pivots[l]] = pi_s[l] * g[l];
        }
        point.elapsed =
            std::chrono::duration<double>(clock::now() - started).count();
        out.points.push_back(std::move(point));
    }
    return out;
}

std::vector<std::vector<int>> connected_components(const Laplacian& L)
{
    const int n = L.size();
    std::vector<int> label(n, -1);
    std::vector<std::vector<int>> comps;
    std::vector<int> stack;
    for(int root = 0; root < n; ++root) {
        if(label[root] >= 0) {
            continue;
        }
        const int id = static_cast<int>(comps.size());
        comps.emplace_back();
        label[root] = id;
        stack.push_back(root);
        while(!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comps[id].push_back(v);
            for(const auto& nb : L.neighbors(v)) {
                if(label[nb.index] < 0) {
                    label[nb.index] = id;
                    stack.push_back(nb.index);
                }
            }
        }
        std::sort(comps[id].begin(), comps[id].end());
    }
    return comps;
}

YieldVector stationary_limit(const RateConstantMatrix& K, const YieldVector& p)
{
    const int n = K.size();
    if(static_cast<int>(p.size()) != n) {
        throw Error(ErrorKind::InvalidArgument, "p has wrong dimension");
    }
    auto comps = connected_components(K.laplacian());
    if(comps.size() > 1) {
        throw DisconnectedNetwork(std::move(comps));
    }
    const double pi_mass =
        std::accumulate(K.pi().begin(), K.pi().end(), 0.0);
    std::vector<double> out(n);
    for(int v = 0; v < n; ++v) {
        out[v] = K.pi(v) / pi_mass * p.total_mass();
    }
    return YieldVector(std::move(out));
}

}  // namespace rcmc
