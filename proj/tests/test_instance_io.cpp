#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "rcmc/errors.hpp"
#include "rcmc/generator.hpp"
#include "rcmc/instance_io.hpp"
#include "rcmc/projection.hpp"
#include "support.hpp"

using namespace rcmc;

namespace
{

std::size_t parse_error_line(const std::string& text)
{
    std::istringstream in(text);
    try {
        read_native(in);
    }
    catch(const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::vector<std::tuple<int, int, double>> edge_list(const RateConstantMatrix& K)
{
    std::vector<std::tuple<int, int, double>> out;
    const auto& L = K.laplacian();
    for(int u = 0; u < K.size(); ++u) {
        for(const auto& nb : L.neighbors(u)) {
            if(nb.index > u) {
                out.emplace_back(u, nb.index, nb.weight);
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("native reader: comments, blank lines and scientific notation")
{
    std::istringstream in(
        "# header comment\n"
        "3 2\n"
        "\n"
        "1.0\n"
        "  1e0\n"
        "# between\n"
        "1\n"
        "1 2 1.0E+00\n"
        "1 3 2e0\n");
    const auto K = read_native(in);
    CHECK(K.size() == 3);
    CHECK(K.laplacian().diagonal(0) == 3.0);
    CHECK(K.laplacian().weight(0, 2) == 2.0);
}

TEST_CASE("native reader drops zero-weight edges")
{
    std::istringstream in("2 1\n1\n1\n1 2 0\n");
    const auto K = read_native(in);
    CHECK(K.laplacian().edge_count() == 0);
    CHECK(K.laplacian().diagonal(0) == 0.0);
}

TEST_CASE("native reader reports line numbers")
{
    CHECK(parse_error_line("2 1\n1\n1\n2 1 1\n") == 4);               // u > v
    CHECK(parse_error_line("2 1\n1\nx\n1 2 1\n") == 3);               // bad number
    CHECK(parse_error_line("2 1\n1\n1\n1 3 1\n") == 4);               // out of range
    CHECK(parse_error_line("# c\n2 1\n1\n1\n1 2 -1\n") == 5);         // negative
    CHECK(parse_error_line("2 2\n1\n1\n1 2 1\n") == 5);               // missing edge
    CHECK(parse_error_line("2 1\n1\n1\n1 2 1\n1 2 1\n") == 5);        // trailing
    CHECK(parse_error_line("2\n") == 1);                              // header
    CHECK(parse_error_line("2 1\n1 1\n1\n1 2 1\n") == 2);             // field count
}

TEST_CASE("native reader surfaces validation errors")
{
    std::istringstream in("2 1\n1\n0\n1 2 1\n");
    try {
        read_native(in);
        FAIL("expected NonpositivePi");
    }
    catch(const Error& e) {
        CHECK(e.kind() == ErrorKind::NonpositivePi);
    }
}

TEST_CASE("rate-triple reader goes through detailed-balance validation")
{
    std::istringstream ok("2 2\n2 1\n1 2 2\n2 1 1\n");
    const auto K = read_rates(ok);
    CHECK(K.rate(0, 1) == doctest::Approx(2.0));
    CHECK(K.exit_rate(1) == doctest::Approx(2.0));

    std::istringstream bad("2 2\n1 1\n1 2 2\n2 1 1\n");
    CHECK_THROWS_AS(read_rates(bad), DetailedBalanceViolation);

    std::istringstream diag("2 1\n1 1\n1 1 2\n");
    CHECK_THROWS_AS(read_rates(diag), ParseError);
}

TEST_CASE("fixture files load")
{
    const auto three = load_native(RCMC_FIXTURES "/three_state.txt");
    CHECK(three.size() == 3);
    const auto two = load_rates(RCMC_FIXTURES "/two_state_rates.txt");
    CHECK(two.pi(0) == 2.0);
    CHECK_THROWS_AS(load_native(RCMC_FIXTURES "/bad_edge.txt"), ParseError);
    CHECK_THROWS_AS(load_native(RCMC_FIXTURES "/missing.txt"), Error);
}

TEST_CASE("write then parse reproduces the instance exactly")
{
    for(std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto K = test::random_instance(50, seed, 100.0, 50.0, 4.0);
        std::ostringstream out;
        write_native(out, K, {"round trip", "second line"});
        std::istringstream in(out.str());
        const auto R = read_native(in);
        CHECK(R.size() == K.size());
        CHECK(R.pi() == K.pi());
        CHECK(edge_list(R) == edge_list(K));
    }
}

TEST_CASE("generator: degenerate range gives unit weights on a connected graph")
{
    GeneratorSpec spec;
    spec.n          = 4;
    spec.avg_degree = 2.0;
    spec.seed       = 7;
    const auto K = generate(spec);
    CHECK(K.size() == 4);
    CHECK(connected_components(K.laplacian()).size() == 1);
    CHECK(K.laplacian().edge_count() == 4);
    for(int v = 0; v < 4; ++v) {
        CHECK(K.pi(v) == 1.0);
        for(const auto& nb : K.laplacian().neighbors(v)) {
            CHECK(nb.weight == 1.0);
        }
    }
}

TEST_CASE("generator is deterministic and respects its ranges")
{
    GeneratorSpec spec;
    spec.n          = 300;
    spec.avg_degree = 3.0;
    spec.seed       = 99;
    spec.weight_lo  = -20.0;
    spec.weight_hi  = 10.0;
    spec.pi_lo      = -3.0;
    spec.pi_hi      = 2.0;
    std::ostringstream a;
    std::ostringstream b;
    write_native(a, generate(spec), {describe(spec)});
    write_native(b, generate(spec), {describe(spec)});
    CHECK(a.str() == b.str());

    const auto K = generate(spec);
    CHECK(connected_components(K.laplacian()).size() == 1);
    CHECK(K.laplacian().edge_count() == 450);
    for(int v = 0; v < K.size(); ++v) {
        CHECK(K.pi(v) >= 1e-3 * (1 - 1e-12));
        CHECK(K.pi(v) <= 1e2 * (1 + 1e-12));
        for(const auto& nb : K.laplacian().neighbors(v)) {
            CHECK(nb.weight >= 1e-20 * (1 - 1e-12));
            CHECK(nb.weight <= 1e10 * (1 + 1e-12));
        }
    }

    spec.seed = 100;
    std::ostringstream c;
    write_native(c, generate(spec), {describe(spec)});
    CHECK(c.str() != a.str());
}

TEST_CASE("generator rejects invalid specs")
{
    GeneratorSpec spec;
    spec.n = 0;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.n         = 5;
    spec.weight_lo = 1.0;
    spec.weight_hi = 0.0;
    try {
        generate(spec);
        FAIL("expected InvalidSpec");
    }
    catch(const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidSpec);
    }
    spec.weight_lo  = 0.0;
    spec.avg_degree = -1.0;
    CHECK_THROWS_AS(generate(spec), Error);
}

TEST_CASE("generator: single state and complete graph cap")
{
    GeneratorSpec spec;
    spec.n = 1;
    CHECK(generate(spec).size() == 1);
    spec.n          = 5;
    spec.avg_degree = 100.0;
    CHECK(generate(spec).laplacian().edge_count() == 10);
}
