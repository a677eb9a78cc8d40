#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace rcmc::test
{

RateConstantMatrix three_state()
{
    LaplacianData data;
    data.n     = 3;
    data.pi    = {1.0, 1.0, 1.0};
    data.edges = {{0, 1, 1.0}, {0, 2, 2.0}};
    return validate(data);
}

RateConstantMatrix two_state()
{
    RateData data;
    data.n     = 2;
    data.pi    = {2.0, 1.0};
    data.rates = {{0, 1, 2.0}, {1, 0, 1.0}};
    return validate(data);
}

RateConstantMatrix random_instance(int n,
                                   std::uint64_t seed,
                                   double half_range,
                                   double pi_half_range,
                                   double degree)
{
    GeneratorSpec spec;
    spec.n          = n;
    spec.avg_degree = degree;
    spec.seed       = seed;
    spec.weight_lo  = -half_range;
    spec.weight_hi  = half_range;
    spec.pi_lo      = -pi_half_range;
    spec.pi_hi      = pi_half_range;
    return generate(spec);
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Eigen::MatrixXd random_dense_laplacian(int n, std::mt19937_64& rng, double density)
{
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for(int u = 0; u < n; ++u) {
        for(int v = u + 1; v < n; ++v) {
            // path edges keep the graph connected
            if(v == u + 1 || uniform(rng) < density) {
                const double w = uniform(rng, 0.1, 2.0);
                L(u, v) = L(v, u) = -w;
                L(u, u) += w;
                L(v, v) += w;
            }
        }
    }
    return L;
}

Eigen::MatrixXd random_psd(int n, std::mt19937_64& rng)
{
    Eigen::MatrixXd A(n, n);
    for(int i = 0; i < n; ++i) {
        for(int j = 0; j < n; ++j) {
            A(i, j) = uniform(rng, -1.0, 1.0);
        }
    }
    return A * A.transpose();
}

bool close(double a, double b, double tol, double floor)
{
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace rcmc::test
