#ifndef RCMC_TEST_SUPPORT_HPP
#define RCMC_TEST_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rcmc/generator.hpp"
#include "rcmc/kinetics.hpp"

namespace rcmc::test
{

/// pi = 1, edges 1-2 (weight 1) and 1-3 (weight 2); diag L = (3, 1, 2).
RateConstantMatrix three_state();

/// K_12 = 2, K_21 = 1, pi = (2, 1).
RateConstantMatrix two_state();

/// Random connected instance with edge weights in 10^[-half_range, half_range]
/// and pi in 10^[-pi_half_range, pi_half_range].
RateConstantMatrix random_instance(int n,
                                   std::uint64_t seed,
                                   double half_range,
                                   double pi_half_range = 0.0,
                                   double degree = 3.0);

/// Random graph Laplacian as a dense matrix with unit pi.
Eigen::MatrixXd random_dense_laplacian(int n, std::mt19937_64& rng, double density = 0.4);

/// A A^T with A of size n x n, entries uniform in [-1, 1].
Eigen::MatrixXd random_psd(int n, std::mt19937_64& rng);

double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0);

/// |a - b| <= tol * max(|a|, |b|, floor).
bool close(double a, double b, double tol, double floor = 0.0);

}  // namespace rcmc::test

#endif
