#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcmc/errors.hpp"
#include "rcmc/greedy.hpp"
#include "support.hpp"

using namespace rcmc;
using rcmc::test::close;

TEST_CASE("greedy on the three-state example")
{
    const auto result = greedy(test::three_state(), 10.0);
    CHECK(result.pivots == std::vector<int>{0, 1});
    REQUIRE(result.pivot_diagonals.size() == 2);
    CHECK(result.pivot_diagonals[0] == 3.0);
    CHECK(result.pivot_diagonals[1] == doctest::Approx(2.0 / 3.0));
    REQUIRE(result.stop_diagonal.has_value());
    CHECK(*result.stop_diagonal == 0.0);
}

TEST_CASE("greedy on the two-state example eliminates the faster state")
{
    const auto result = greedy(test::two_state(), 1e12);
    CHECK(result.pivots == std::vector<int>{1});
    CHECK(result.pivot_diagonals[0] == 2.0);
    CHECK(*result.stop_diagonal == 0.0);
}

TEST_CASE("greedy stops immediately below the threshold and accepts equality")
{
    const auto K = test::three_state();
    const auto none = greedy(K, 0.1);
    CHECK(none.k() == 0);
    CHECK(*none.stop_diagonal == 3.0);

    // 1 / t_max equal to the first diagonal is accepted
    const auto equal = greedy(K, 1.0 / 3.0);
    CHECK(equal.pivots == std::vector<int>{0});

    CHECK_THROWS_AS(greedy(K, 0.0), Error);
}

TEST_CASE("greedy breaks ties toward the smallest index")
{
    LaplacianData data;
    data.n     = 4;
    data.pi    = {1.0, 1.0, 1.0, 1.0};
    data.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}};
    const auto result = greedy(validate(data), 1e6);
    REQUIRE(result.k() >= 1);
    CHECK(result.pivots[0] == 0);
}

TEST_CASE("greedy working matrix equals the scaled Schur complement")
{
    for(std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto K = test::random_instance(24, seed, 2.0, 1.0);
        const auto result = greedy(K, 1e5);
        // cancellation is relative to the original rates, not the shrinking block
        const double rate_scale = K.dense().cwiseAbs().maxCoeff();
        int checked = 0;
        greedy(K, 1e5, [&](const GreedySnapshot& snap) {
            const std::span<const int> S(result.pivots.data(), snap.j);
            const auto sc = schur_complement_dense(K.laplacian(), S);
            REQUIRE(std::vector<int>(snap.remaining.begin(), snap.remaining.end()) == sc.remaining);
            const auto m = sc.matrix.rows();
            double scale = rate_scale;
            for(Eigen::Index b = 0; b < m; ++b) {
                scale = std::max(scale, sc.matrix.col(b).cwiseAbs().maxCoeff() / K.pi(sc.remaining[b]));
            }
            for(Eigen::Index a = 0; a < m; ++a) {
                for(Eigen::Index b = 0; b < m; ++b) {
                    const double expect = sc.matrix(a, b) / K.pi(sc.remaining[b]);
                    CHECK(std::abs(snap.minus_k(a, b) - expect) <= 1e-10 * scale);
                }
            }
            ++checked;
        });
        CHECK(checked > 0);
    }
}

TEST_CASE("pivot diagonals are sums of nonnegative terms")
{
    for(std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto K = test::random_instance(40, seed, 40.0, 10.0);
        greedy(K, 1e300, [&](const GreedySnapshot& snap) {
            const auto m = snap.minus_k.rows();
            for(Eigen::Index b = 0; b < m; ++b) {
                double off = 0.0;
                for(Eigen::Index a = 0; a < m; ++a) {
                    if(a != b) {
                        CHECK(snap.minus_k(a, b) <= 0.0);
                        off -= snap.minus_k(a, b);
                    }
                }
                CHECK(snap.minus_k(b, b) >= 0.0);
                CHECK(close(snap.minus_k(b, b), off, 1e-12, 1e-300));
            }
        });
    }
}

TEST_CASE("marginal_gain_logdet examples")
{
    const auto K = test::three_state();
    CHECK(marginal_gain_logdet(K, {}, 0) == doctest::Approx(std::log(3.0)));
    const std::vector<int> S{0};
    CHECK(marginal_gain_logdet(K, S, 1) == doctest::Approx(std::log(2.0 / 3.0)));

    LaplacianData data{2, {}, {1.0, 1.0}};
    const auto isolated = validate(data);
    CHECK(marginal_gain_logdet(isolated, {}, 0) == -std::numeric_limits<double>::infinity());
    const std::vector<int> S0{0};
    CHECK_THROWS_AS(marginal_gain_logdet(isolated, S0, 1), Error);
}

TEST_CASE("exp of the marginal gain equals the greedy pivot diagonal")
{
    for(std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto K = test::random_instance(10, seed, 1.0, 1.0);
        const auto result = greedy(K, 1e6);
        for(int j = 0; j < result.k(); ++j) {
            const std::span<const int> S(result.pivots.data(), j);
            const double gain = marginal_gain_logdet(K, S, result.pivots[j]);
            CHECK(close(std::exp(gain), result.pivot_diagonals[j], 1e-8));
        }
    }
}

TEST_CASE("log-det marginal gains are submodular along greedy prefixes")
{
    for(std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto K = test::random_instance(10, seed, 1.0, 1.0);
        const auto result = greedy(K, 1e6);
        const int k = result.k();
        for(int small = 0; small < k; ++small) {
            for(int large = small + 1; large < k; ++large) {
                const std::span<const int> S(result.pivots.data(), small);
                const std::span<const int> T(result.pivots.data(), large);
                for(int v = 0; v < K.size(); ++v) {
                    if(std::find(T.begin(), T.end(), v) != T.end()) {
                        continue;
                    }
                    CHECK(marginal_gain_logdet(K, S, v)
                          >= marginal_gain_logdet(K, T, v) - 1e-8);
                }
            }
        }
    }
}
