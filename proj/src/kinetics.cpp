#include "rcmc/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "rcmc/errors.hpp"

namespace rcmc
{

namespace
{

void check_index(int v, int n, const char* what)
{
    if(v < 0 || v >= n) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(what) + " index " + std::to_string(v + 1)
                        + " outside 1.." + std::to_string(n));
    }
}

void check_pi(const std::vector<double>& pi, int n)
{
    if(static_cast<int>(pi.size()) != n) {
        throw Error(ErrorKind::InvalidArgument,
                    "pi has " + std::to_string(pi.size())
                        + " entries, expected " + std::to_string(n));
    }
    for(int v = 0; v < n; ++v) {
        if(!(pi[v] > 0.0) || !std::isfinite(pi[v])) {
            throw Error(ErrorKind::NonpositivePi,
                        "pi_" + std::to_string(v + 1) + " = "
                            + std::to_string(pi[v]));
        }
    }
}

}  // namespace

Laplacian::Laplacian(int n, std::span<const WeightedEdge> edges)
  : adjacency_(n), diagonal_(n, 0.0)
{
    for(const auto& e : edges) {
        check_index(e.u, n, "edge");
        check_index(e.v, n, "edge");
        if(e.u == e.v) {
            throw Error(ErrorKind::InvalidArgument,
                        "self loop at state " + std::to_string(e.u + 1));
        }
        if(e.weight < 0.0 || !std::isfinite(e.weight)) {
            throw Error(ErrorKind::NegativeRate,
                        "edge (" + std::to_string(e.u + 1) + ", "
                            + std::to_string(e.v + 1) + ") has weight "
                            + std::to_string(e.weight));
        }
        if(e.weight == 0.0) {
            continue;
        }
        adjacency_[e.u].push_back({e.v, e.weight});
        adjacency_[e.v].push_back({e.u, e.weight});
        ++edge_count_;
    }
    for(int v = 0; v < n; ++v) {
        auto& adj = adjacency_[v];
        std::sort(adj.begin(), adj.end(), [](const auto& a, const auto& b) {
            return a.index < b.index;
        });
        for(std::size_t i = 1; i < adj.size(); ++i) {
            if(adj[i].index == adj[i - 1].index) {
                throw Error(ErrorKind::InvalidArgument,
                            "duplicate edge (" + std::to_string(v + 1) + ", "
                                + std::to_string(adj[i].index + 1) + ")");
            }
        }
        double sum = 0.0;
        for(const auto& nb : adj) {
            sum += nb.weight;
        }
        diagonal_[v] = sum;
    }
}

double Laplacian::weight(int u, int v) const
{
    const auto& adj = adjacency_[u];
    const auto it =
        std::lower_bound(adj.begin(), adj.end(), v, [](const auto& a, int x) {
            return a.index < x;
        });
    if(it != adj.end() && it->index == v) {
        return it->weight;
    }
    return 0.0;
}

double Laplacian::entry(int u, int v) const
{
    if(u == v) {
        return diagonal_[u];
    }
    return -weight(u, v);
}

Eigen::MatrixXd Laplacian::dense() const
{
    const int n = size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for(int v = 0; v < n; ++v) {
        out(v, v) = diagonal_[v];
        for(const auto& nb : adjacency_[v]) {
            out(nb.index, v) = -nb.weight;
        }
    }
    return out;
}

RateConstantMatrix::RateConstantMatrix(Laplacian laplacian,
                                       std::vector<double> pi)
  : laplacian_(std::move(laplacian)), pi_(std::move(pi))
{}

double RateConstantMatrix::rate(int u, int v) const
{
    if(u == v) {
        return -exit_rate(v);
    }
    return laplacian_.weight(u, v) / pi_[v];
}

double RateConstantMatrix::exit_rate(int v) const
{
    return laplacian_.diagonal(v) / pi_[v];
}

Eigen::MatrixXd RateConstantMatrix::dense() const
{
    Eigen::MatrixXd out = laplacian_.dense();
    for(int v = 0; v < size(); ++v) {
        out.col(v) *= -1.0 / pi_[v];
    }
    return out;
}

RateConstantMatrix validate(const RateData& data, double tolerance)
{
    const int n = data.n;
    if(n < 0) {
        throw Error(ErrorKind::InvalidArgument, "negative state count");
    }

    std::map<std::pair<int, int>, double> rates;
    for(const auto& t : data.rates) {
        check_index(t.row, n, "rate");
        check_index(t.col, n, "rate");
        if(t.row == t.col) {
            continue;
        }
        if(t.value < 0.0 || !std::isfinite(t.value)) {
            throw Error(ErrorKind::NegativeRate,
                        "K_" + std::to_string(t.row + 1) + ","
                            + std::to_string(t.col + 1) + " = "
                            + std::to_string(t.value));
        }
        if(t.value == 0.0) {
            continue;
        }
        if(!rates.emplace(std::pair{t.row, t.col}, t.value).second) {
            throw Error(ErrorKind::InvalidArgument,
                        "duplicate rate K_" + std::to_string(t.row + 1) + ","
                            + std::to_string(t.col + 1));
        }
    }
    check_pi(data.pi, n);

    std::vector<WeightedEdge> edges;
    double worst = -1.0;
    int worst_u = -1;
    int worst_v = -1;
    for(const auto& [key, k_uv] : rates) {
        const auto [u, v] = key;
        const auto it = rates.find({v, u});
        if(it == rates.end()) {
            throw Error(ErrorKind::AsymmetricPattern,
                        "K_" + std::to_string(u + 1) + ","
                            + std::to_string(v + 1) + " is nonzero but K_"
                            + std::to_string(v + 1) + ","
                            + std::to_string(u + 1) + " is not");
        }
        if(u > v) {
            continue;
        }
        // -L_uv = K_uv pi_v and -L_vu = K_vu pi_u
        const double w_uv = k_uv * data.pi[v];
        const double w_vu = it->second * data.pi[u];
        const double residual =
            std::abs(w_uv - w_vu) / std::max(w_uv, w_vu);
        if(residual > worst) {
            worst   = residual;
            worst_u = u;
            worst_v = v;
        }
        edges.push_back({u, v, 0.5 * (w_uv + w_vu)});
    }
    if(worst > tolerance) {
        throw DetailedBalanceViolation(worst_u, worst_v, worst);
    }
    return RateConstantMatrix(Laplacian(n, edges), data.pi);
}

RateConstantMatrix validate(const LaplacianData& data)
{
    if(data.n < 0) {
        throw Error(ErrorKind::InvalidArgument, "negative state count");
    }
    Laplacian L(data.n, data.edges);
    check_pi(data.pi, data.n);
    return RateConstantMatrix(std::move(L), data.pi);
}

Laplacian to_laplacian(const RateConstantMatrix& K)
{
    return K.laplacian();
}

YieldVector::YieldVector(std::vector<double> values)
  : values_(std::move(values))
{
    double mass  = 0.0;
    double scale = 0.0;
    for(const double x : values_) {
        if(!std::isfinite(x)) {
            throw Error(ErrorKind::InvalidArgument, "non-finite yield");
        }
        mass += x;
        scale += std::abs(x);
    }
    const double slack = -1e-12 * std::max(1.0, scale);
    for(std::size_t v = 0; v < values_.size(); ++v) {
        if(values_[v] < slack) {
            throw Error(ErrorKind::InvalidArgument,
                        "negative yield at state " + std::to_string(v + 1));
        }
    }
    total_mass_ = mass;
}

SchurComplement schur_complement_dense(const Laplacian& L,
                                       std::span<const int> pivots)
{
    const int n = L.size();
    Eigen::MatrixXd work = L.dense();
    std::vector<char> eliminated(n, 0);
    for(const int s : pivots) {
        check_index(s, n, "pivot");
        if(eliminated[s]) {
            throw Error(ErrorKind::InvalidArgument,
                        "pivot " + std::to_string(s + 1) + " repeated");
        }
        const double pivot = work(s, s);
        if(!(pivot > 0.0)) {
            throw Error(ErrorKind::SingularPivot,
                        "diagonal of state " + std::to_string(s + 1)
                            + " is " + std::to_string(pivot));
        }
        eliminated[s] = 1;
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
    }

    SchurComplement out;
    for(int v = 0; v < n; ++v) {
        if(!eliminated[v]) {
            out.remaining.push_back(v);
        }
    }
    const auto m = static_cast<Eigen::Index>(out.remaining.size());
    out.matrix.resize(m, m);
    for(Eigen::Index a = 0; a < m; ++a) {
        for(Eigen::Index b = 0; b < m; ++b) {
            out.matrix(a, b) = work(out.remaining[a], out.remaining[b]);
        }
    }
    return out;
}

YieldVector exact_solve_small(const RateConstantMatrix& K,
                              const YieldVector& p,
                              double t)
{
    const int n = K.size();
    if(static_cast<int>(p.size()) != n) {
        throw Error(ErrorKind::InvalidArgument, "p has wrong dimension");
    }
    if(n > 50) {
        throw Error(ErrorKind::OracleOutOfRange,
                    "n = " + std::to_string(n) + " exceeds 50");
    }
    if(!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorKind::OracleOutOfRange, "time must be finite and >= 0");
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for(int v = 0; v < n; ++v) {
        for(int u = 0; u < n; ++u) {
            const double a = std::abs(K.rate(u, v));
            if(a > 0.0) {
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
        }
    }
    if(hi > 0.0 && hi / lo > 1e6) {
        throw Error(ErrorKind::OracleOutOfRange,
                    "dynamic range " + std::to_string(hi / lo)
                        + " exceeds 1e6");
    }
    if(t == 0.0) {
        return p;
    }

    Eigen::VectorXd sqrt_pi(n);
    for(int v = 0; v < n; ++v) {
        sqrt_pi(v) = std::sqrt(K.pi(v));
    }
    Eigen::MatrixXd A = K.laplacian().dense();
    A = sqrt_pi.cwiseInverse().asDiagonal() * A
        * sqrt_pi.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);

    // exp(tK) = Pi^{1/2} V exp(-t Lambda) V^T Pi^{-1/2}
    Eigen::VectorXd y(n);
    for(int v = 0; v < n; ++v) {
        y(v) = p[v] / sqrt_pi(v);
    }
    Eigen::VectorXd z = eig.eigenvectors().transpose() * y;
    for(int i = 0; i < n; ++i) {
        const double lambda = std::max(eig.eigenvalues()(i), 0.0);
        z(i) *= std::exp(-t * lambda);
    }
    Eigen::VectorXd x = sqrt_pi.asDiagonal() * (eig.eigenvectors() * z);

    std::vector<double> out(n);
    for(int v = 0; v < n; ++v) {
        out[v] = x(v);
    }
    return YieldVector(std::move(out));
}

}  // namespace rcmc
