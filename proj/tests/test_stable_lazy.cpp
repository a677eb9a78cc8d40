#include <doctest.h>

#include <cmath>

#include "rcmc/counters.hpp"
#include "rcmc/errors.hpp"
#include "rcmc/greedy.hpp"
#include "rcmc/lazy_fast.hpp"
#include "rcmc/stable_lazy.hpp"
#include "support.hpp"

using namespace rcmc;
using rcmc::test::close;

namespace
{

// First `columns` columns of a complete factor, appended in the order a
// selection run produces them.
CholeskyFactor truncated(const CholeskyFactor& full, int columns)
{
    const int n = full.size();
    std::vector<char> pivoted(n, 0);
    CholeskyFactor out(n);
    for(int l = 0; l < columns; ++l) {
        const int s = full.pivot(l);
        for(int u = 0; u < n; ++u) {
            if(!pivoted[u] && u != s) {
                out.append(u, full(u, l));
            }
        }
        out.append_pivot(s, full(s, l));
        pivoted[s] = 1;
    }
    return out;
}

void check_clean(const LazyResult& run, int n, bool relaxed)
{
    for(const auto& message : check_counters(run.counters, run.result.k(), n, true, relaxed)) {
        FAIL_CHECK(message);
    }
}

}  // namespace

TEST_CASE("compressed Laplacian entry of the three-state example")
{
    const auto K = test::three_state();
    const SegmentTreeBank bank(K.laplacian());
    CHECK(compressed_entry_L(bank, 0, 0) == -3.0);
    // u = 2 is the first (only) sparse position of column 1
    CHECK(compressed_entry_L(bank, 1, 0) == -2.0);
    CHECK(compressed_entry_L(bank, 2, 0) == -1.0);
    // v not adjacent to u: the whole column
    CHECK(compressed_entry_L(bank, 2, 1) == -1.0);
}

TEST_CASE("bank clear and held")
{
    const auto K = test::three_state();
    SegmentTreeBank bank(K.laplacian());
    CHECK(bank.held(0, 2) == 2.0);
    CHECK(bank.held(1, 2) == 0.0);
    bank.clear(0, 2);
    bank.clear(1, 2);  // non-neighbor: no-op
    CHECK(bank.held(0, 2) == 0.0);
    CHECK(bank.total(0) == 1.0);
    CHECK(bank.total(1) == 1.0);
}

TEST_CASE("stable diagonal of the three-state example")
{
    const auto K = test::three_state();
    const Eigen::MatrixXd L = K.laplacian().dense();
    SUBCASE("j = 1 gives the Laplacian diagonal")
    {
        const SegmentTreeBank bank(K.laplacian());
        const CholeskyFactor empty(3);
        CompressedRow row;
        for(int u = 0; u < 3; ++u) {
            const auto d = stably_compute_diagonal(u, empty, bank, row);
            CHECK(d.value == L(u, u));
            CHECK(d.inner_product_dim == 0);
            CHECK(row.entries.empty());
        }
    }
    SUBCASE("j = 2, u = 2")
    {
        const auto full = gaussian_cholesky(L, 1.0);
        REQUIRE(full.rank() == 1);
        SegmentTreeBank bank(K.laplacian());
        bank.clear(1, 0);  // b_2 advanced past pivot 1
        CompressedRow row;
        const auto d = stably_compute_diagonal(1, full, bank, row);
        REQUIRE(row.entries.size() == 1);
        CHECK(row.entries[0] == doctest::Approx(-2.0 / std::sqrt(3.0)));
        CHECK(d.value == doctest::Approx(2.0 / 3.0));
        CHECK(d.inner_product_dim == 1);
    }
}

TEST_CASE("relax path on a zero factor entry")
{
    // state 3 is isolated, so C_31 = 0; the previous row belongs to pivot 1
    // and its only entry is -C_11 = -1
    LaplacianData data{3, {{0, 1, 1.0}}, {1.0, 1.0, 1.0}};
    const auto K = validate(data);
    const auto full = gaussian_cholesky(K.laplacian().dense(), 0.9);
    REQUIRE(full.rank() == 1);
    SegmentTreeBank bank(K.laplacian());
    bank.clear(2, 0);
    CompressedRow previous{{-1.0}};
    CompressedRow relaxed;
    CompressedRow direct;
    const auto a = stably_compute_diagonal(2, full, bank, relaxed, RelaxGate{1e-16, &previous});
    const auto b = stably_compute_diagonal(2, full, bank, direct);
    CHECK(a.relax_hits == 1);
    CHECK(relaxed.entries == direct.entries);
    CHECK(a.value == b.value);
}

TEST_CASE("compressed rows equal column sums of the factor")
{
    for(std::uint64_t seed = 1; seed <= 12; ++seed) {
        const int n = 8 + static_cast<int>(seed % 25);
        const auto K = test::random_instance(n, seed, 2.0, 1.0, 3.5);
        const auto& L = K.laplacian();
        const auto [result, full] = greedy_factorized(K, 1e8);
        for(int j = 1; j <= result.k(); ++j) {
            const auto C = truncated(full, j - 1);
            std::vector<char> in_s(n, 0);
            for(int l = 0; l < j - 1; ++l) {
                in_s[result.pivots[l]] = 1;
            }
            SegmentTreeBank bank(L);
            for(int v = 0; v < n; ++v) {
                for(int l = 0; l < j - 1; ++l) {
                    bank.clear(v, result.pivots[l]);
                }
            }
            const std::span<const int> S(result.pivots.data(), j - 1);
            const auto sc = schur_complement_dense(L, S);
            for(int u = 0; u < n; ++u) {
                if(in_s[u]) {
                    continue;
                }
                // brute-force compressed Laplacian entries
                for(int v = 0; v < n; ++v) {
                    if(!in_s[v] && v != u) {
                        continue;
                    }
                    double brute = 0.0;
                    for(int w = 0; w < n; ++w) {
                        if(!in_s[w] && w != u) {
                            brute += L.entry(w, v);
                        }
                    }
                    CHECK(close(compressed_entry_L(bank, u, v), brute, 1e-13, 1e-300));
                }
                CompressedRow row;
                const auto d = stably_compute_diagonal(u, C, bank, row);
                for(int l = 0; l < j - 1; ++l) {
                    double column_sum = 0.0;
                    for(int v = 0; v < n; ++v) {
                        if(!in_s[v] && v != u) {
                            column_sum += full(v, l);
                        }
                    }
                    CHECK(row.entries[l] <= 0.0);
                    CHECK(close(row.entries[l], column_sum, 1e-10, 1e-14 * full.pivot_value(l)));
                }
                const auto pos = std::find(sc.remaining.begin(), sc.remaining.end(), u)
                                 - sc.remaining.begin();
                CHECK(close(d.value, sc.matrix(pos, pos), 1e-10, 1e-14 * L.diagonal(u)));
            }
        }
    }
}

TEST_CASE("explicit compression is a graph Laplacian")
{
    const auto K = test::random_instance(12, 4, 1.0);
    const Eigen::MatrixXd L = K.laplacian().dense();
    const auto result = greedy(K, 1e6);
    REQUIRE(result.k() >= 2);
    const int j = 2;
    const std::vector<int> S(result.pivots.begin(), result.pivots.begin() + j - 1);
    int u = 0;
    while(std::find(S.begin(), S.end(), u) != S.end()) {
        ++u;
    }
    // index order: S, u, star
    std::vector<int> group(12, -1);
    for(std::size_t a = 0; a < S.size(); ++a) {
        group[S[a]] = static_cast<int>(a);
    }
    const int m = static_cast<int>(S.size()) + 2;
    group[u] = m - 2;
    for(int v = 0; v < 12; ++v) {
        if(group[v] < 0) {
            group[v] = m - 1;
        }
    }
    Eigen::MatrixXd Lc = Eigen::MatrixXd::Zero(m, m);
    for(int a = 0; a < 12; ++a) {
        for(int b = 0; b < 12; ++b) {
            Lc(group[a], group[b]) += L(a, b);
        }
    }
    CHECK((Lc - Lc.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    for(int c = 0; c < m; ++c) {
        CHECK(std::abs(Lc.col(c).sum()) <= 1e-12 * L.cwiseAbs().maxCoeff());
        for(int r = 0; r < m; ++r) {
            if(r != c) {
                CHECK(Lc(r, c) <= 0.0);
            }
        }
    }
}

TEST_CASE("stable variants match greedy with exact counters")
{
    for(const int n : {16, 64, 256}) {
        for(std::uint64_t seed = 1; seed <= 6; ++seed) {
            const auto K = test::random_instance(n, seed, 3.0, 1.0);
            for(const double t_max : {1e-1, 1e3}) {
                CAPTURE(n);
                CAPTURE(seed);
                CAPTURE(t_max);
                const auto reference = greedy(K, t_max);
                StableOptions audited;
                audited.audit = n <= 64;
                const auto stable = stable_lazy_fast_greedy(K, t_max, audited);
                CHECK(stable.result.pivots == reference.pivots);
                check_clean(stable, n, false);
                CHECK(stable.counters.relax_hits == 0);
                for(const double eps : {0.0, 1e-16, 1.0}) {
                    StableOptions options;
                    options.eps_relax = eps;
                    options.audit     = n <= 64;
                    const auto relaxed = stable_lazy_fast_greedy(K, t_max, options);
                    CHECK(relaxed.result.pivots == reference.pivots);
                    check_clean(relaxed, n, true);
                    if(eps == 0.0) {
                        CHECK(relaxed.counters.relax_hits == 0);
                        CHECK(relaxed.counters.m_diag == stable.counters.m_diag);
                    }
                }
            }
        }
    }
}

TEST_CASE("relaxed and unrelaxed runs agree on n = 64 traces")
{
    for(std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto K = test::random_instance(64, seed, 5.0, 2.0, 4.0);
        StableOptions options;
        options.eps_relax = 1e-16;
        const auto relaxed = stable_lazy_fast_greedy(K, 1e6, options);
        const auto stable  = stable_lazy_fast_greedy(K, 1e6);
        CHECK(relaxed.result.pivots == stable.result.pivots);
        CHECK(relaxed.counters.m_diag <= stable.counters.m_diag);
    }
}

TEST_CASE("stable run survives a wide dynamic range where greedy is the reference")
{
    for(std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto K = test::random_instance(100, seed, 100.0, 20.0);
        const auto reference = greedy(K, 86400.0);
        const auto stable = stable_lazy_fast_greedy(K, 86400.0);
        CHECK(stable.result.pivots == reference.pivots);
    }
}

TEST_CASE("subtraction_error_bound examples")
{
    const auto verdict = subtraction_error_bound(3.003, 0.999, 1e-3, 1.0);
    CHECK(verdict.decision == SubtractionDecision::Allow);
    CHECK(verdict.bound == doctest::Approx(2e-3));
    const double x_hat = 3.003 - 0.999;
    CHECK(std::abs(x_hat - 2.0) / 2.0 <= verdict.bound * (1 + 1e-12));

    const auto zero = subtraction_error_bound(5.0, 0.0, 1e-3, 0.0);
    CHECK(zero.decision == SubtractionDecision::Allow);
    CHECK(zero.bound == doctest::Approx(1e-3));

    CHECK(subtraction_error_bound(1.0, 0.5, 1e-3, 1.0).decision == SubtractionDecision::Deny);
    CHECK(subtraction_error_bound(-1.0, -0.2, 1e-3, 1.0).decision == SubtractionDecision::Allow);
    CHECK(relax_ratio_threshold(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(relax_ratio_threshold(0.0) == 0.0);
}

TEST_CASE("subtraction_error_bound preconditions")
{
    const auto kind = [](auto&& f) {
        try {
            f();
        }
        catch(const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind([] { subtraction_error_bound(1.0, 1.0, 1e-3, 1.0); })
          == ErrorKind::PreconditionViolation);
    CHECK(kind([] { subtraction_error_bound(1.0, -0.5, 1e-3, 1.0); })
          == ErrorKind::PreconditionViolation);
    CHECK(kind([] { subtraction_error_bound(1.0, 0.5, 0.5, 2.0); })
          == ErrorKind::PreconditionViolation);
    CHECK(kind([] { subtraction_error_bound(1.0, 0.5, 1e-3, -1.0); })
          == ErrorKind::PreconditionViolation);
}

TEST_CASE("gate bound with estimated ratio can be exceeded")
{
    // a = 1, b = 11/27 perturbed by +10% and -10%: the estimated ratio sits
    // exactly on the eps = 1 threshold while the true ratio is above it.
    const double a = 1.0;
    const double b = 11.0 / 27.0;
    const double a_hat = 1.1;
    const double b_hat = 11.0 / 30.0;
    const double e = 0.1;
    const auto verdict = subtraction_error_bound(a_hat, b_hat, e, 1.0 + 1e-12);
    REQUIRE(verdict.decision == SubtractionDecision::Allow);
    const double err = std::abs((a_hat - b_hat) - (a - b)) / (a - b);
    CHECK(err == doctest::Approx(0.2375).epsilon(1e-12));
    CHECK(err > verdict.bound);
}

TEST_CASE("subtraction error is bounded through the true ratio")
{
    // |x_hat - x| <= e (|a| + |b|), so err <= e (1 + b/a) / (1 - b/a).
    std::mt19937_64 rng(8);
    for(int draw = 0; draw < 20000; ++draw) {
        const long double e  = std::pow(10.0L, static_cast<long double>(test::uniform(rng, -12.0, -0.5)));
        const long double a  = std::pow(10.0L, static_cast<long double>(test::uniform(rng, -5.0, 5.0)));
        const long double b  = a * static_cast<long double>(test::uniform(rng, 0.0, 0.9));
        const long double da = e * static_cast<long double>(test::uniform(rng, -1.0, 1.0));
        const long double db = e * static_cast<long double>(test::uniform(rng, -1.0, 1.0));
        const long double x     = a - b;
        const long double x_hat = a * (1 + da) - b * (1 + db);
        const long double rho   = b / a;
        const long double err   = std::abs(x_hat - x) / x;
        CHECK(err <= e * (1 + rho) / (1 - rho) * (1 + 1e-9L));
    }
}
