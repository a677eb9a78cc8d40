#include "rcmc/instance_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "rcmc/errors.hpp"

namespace rcmc
{

namespace
{

// Line reader that skips blank and '#' lines and splits on whitespace.
class TokenLines
{
public:
    explicit TokenLines(std::istream& in) : in_(in) {}

    // Next content line's tokens; false at end of input.
    bool next(std::vector<std::string_view>& tokens)
    {
        while(std::getline(in_, line_)) {
            ++number_;
            tokens.clear();
            std::size_t i = 0;
            while(i < line_.size()) {
                while(i < line_.size() && std::isspace(static_cast<unsigned char>(line_[i]))) {
                    ++i;
                }
                if(i == line_.size()) {
                    break;
                }
                std::size_t j = i;
                while(j < line_.size() && !std::isspace(static_cast<unsigned char>(line_[j]))) {
                    ++j;
                }
                tokens.emplace_back(line_.data() + i, j - i);
                i = j;
            }
            if(tokens.empty() || tokens.front().front() == '#') {
                continue;
            }
            return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return number_; }

    [[noreturn]] void fail(const std::string& message) const
    {
        throw ParseError(number_, message);
    }

    void expect(std::vector<std::string_view>& tokens,
                std::size_t count,
                const char* what)
    {
        if(!next(tokens)) {
            throw ParseError(number_ + 1, std::string("missing ") + what);
        }
        if(tokens.size() != count) {
            fail(std::string("expected ") + std::to_string(count)
                 + " fields for " + what + ", got "
                 + std::to_string(tokens.size()));
        }
    }

private:
    std::istream& in_;
    std::string line_;
    std::size_t number_ = 0;
};

double to_double(const TokenLines& lines, std::string_view token)
{
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec]  = std::from_chars(token.data(), end, value);
    if(ec != std::errc() || ptr != end) {
        lines.fail("cannot parse number '" + std::string(token) + "'");
    }
    return value;
}

long long to_integer(const TokenLines& lines, std::string_view token)
{
    long long value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec]  = std::from_chars(token.data(), end, value);
    if(ec != std::errc() || ptr != end) {
        lines.fail("cannot parse integer '" + std::string(token) + "'");
    }
    return value;
}

int to_state(const TokenLines& lines, std::string_view token, int n)
{
    const auto v = to_integer(lines, token);
    if(v < 1 || v > n) {
        lines.fail("state " + std::string(token) + " outside 1.."
                   + std::to_string(n));
    }
    return static_cast<int>(v - 1);
}

std::pair<int, long long> read_header(TokenLines& lines,
                                      std::vector<std::string_view>& tokens)
{
    lines.expect(tokens, 2, "header 'n m'");
    const auto n = to_integer(lines, tokens[0]);
    const auto m = to_integer(lines, tokens[1]);
    if(n < 0 || n > (1LL << 30) || m < 0) {
        lines.fail("invalid header");
    }
    return {static_cast<int>(n), m};
}

void expect_end(TokenLines& lines, std::vector<std::string_view>& tokens)
{
    if(lines.next(tokens)) {
        lines.fail("unexpected trailing content");
    }
}

}  // namespace

LaplacianData parse_native(std::istream& in)
{
    TokenLines lines(in);
    std::vector<std::string_view> tokens;
    const auto [n, m] = read_header(lines, tokens);

    LaplacianData data;
    data.n = n;
    data.pi.reserve(n);
    for(int v = 0; v < n; ++v) {
        lines.expect(tokens, 1, "pi value");
        data.pi.push_back(to_double(lines, tokens[0]));
    }
    data.edges.reserve(static_cast<std::size_t>(m));
    for(long long e = 0; e < m; ++e) {
        lines.expect(tokens, 3, "edge 'u v w'");
        const int u     = to_state(lines, tokens[0], n);
        const int v     = to_state(lines, tokens[1], n);
        const double w  = to_double(lines, tokens[2]);
        if(u >= v) {
            lines.fail("edge requires u < v");
        }
        if(w < 0.0) {
            lines.fail("negative edge weight");
        }
        if(w > 0.0) {
            data.edges.push_back({u, v, w});
        }
    }
    expect_end(lines, tokens);
    return data;
}

RateData parse_rates(std::istream& in)
{
    TokenLines lines(in);
    std::vector<std::string_view> tokens;
    const auto [n, m] = read_header(lines, tokens);

    RateData data;
    data.n = n;
    if(n > 0) {
        lines.expect(tokens, static_cast<std::size_t>(n), "pi line");
        for(const auto token : tokens) {
            data.pi.push_back(to_double(lines, token));
        }
    }
    for(long long e = 0; e < m; ++e) {
        lines.expect(tokens, 3, "rate 'u v K_uv'");
        const int u      = to_state(lines, tokens[0], n);
        const int v      = to_state(lines, tokens[1], n);
        const double k   = to_double(lines, tokens[2]);
        if(u == v) {
            lines.fail("diagonal rates are derived, not read");
        }
        data.rates.push_back({u, v, k});
    }
    expect_end(lines, tokens);
    return data;
}

RateConstantMatrix read_native(std::istream& in)
{
    return validate(parse_native(in));
}

RateConstantMatrix read_rates(std::istream& in, double tolerance)
{
    return validate(parse_rates(in), tolerance);
}

namespace
{

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if(!in) {
        throw Error(ErrorKind::InvalidArgument,
                    "cannot open '" + path.string() + "'");
    }
    return in;
}

}  // namespace

RateConstantMatrix load_native(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return read_native(in);
}

RateConstantMatrix load_rates(const std::filesystem::path& path,
                              double tolerance)
{
    auto in = open_input(path);
    return read_rates(in, tolerance);
}

void write_native(std::ostream& out,
                  const RateConstantMatrix& K,
                  const std::vector<std::string>& header)
{
    char buf[64];
    const auto& L = K.laplacian();
    for(const auto& line : header) {
        out << "# " << line << '\n';
    }
    out << K.size() << ' ' << L.edge_count() << '\n';
    for(int v = 0; v < K.size(); ++v) {
        std::snprintf(buf, sizeof buf, "%.17g", K.pi(v));
        out << buf << '\n';
    }
    for(int u = 0; u < K.size(); ++u) {
        for(const auto& nb : L.neighbors(u)) {
            if(nb.index > u) {
                std::snprintf(buf, sizeof buf, "%.17g", nb.weight);
                out << u + 1 << ' ' << nb.index + 1 << ' ' << buf << '\n';
            }
        }
    }
}

}  // namespace rcmc
