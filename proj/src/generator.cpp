#include "rcmc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "rcmc/errors.hpp"

namespace rcmc
{

namespace
{

// Only raw mt19937_64 outputs are used; the distributions of <random> are
// implementation-defined and would make files differ across toolchains.
class Stream
{
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while(x >= limit);
        return x % bound;
    }

    double log_uniform(double lo, double hi)
    {
        return std::pow(10.0, lo + (hi - lo) * uniform());
    }

private:
    std::mt19937_64 engine_;
};

void check(const GeneratorSpec& spec)
{
    if(spec.n < 1) {
        throw Error(ErrorKind::InvalidSpec, "n must be at least 1");
    }
    if(!(spec.weight_lo <= spec.weight_hi) || !(spec.pi_lo <= spec.pi_hi)) {
        throw Error(ErrorKind::InvalidSpec, "log10 range has lo > hi");
    }
    if(!(spec.avg_degree >= 0.0)) {
        throw Error(ErrorKind::InvalidSpec, "average degree must be nonnegative");
    }
    // 10^x must stay a positive finite double.
    for(const double x : {spec.weight_lo, spec.weight_hi, spec.pi_lo, spec.pi_hi}) {
        if(!(std::abs(x) <= 300.0)) {
            throw Error(ErrorKind::InvalidSpec, "log10 bound outside [-300, 300]");
        }
    }
}

}  // namespace

RateConstantMatrix generate(const GeneratorSpec& spec)
{
    check(spec);
    const int n = spec.n;
    Stream rng(spec.seed);

    std::vector<int> order(n);
    for(int i = 0; i < n; ++i) {
        order[i] = i;
    }
    for(int i = n - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }

    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<int, int>> pairs;
    auto add = [&](int u, int v) {
        if(u > v) {
            std::swap(u, v);
        }
        const auto key = static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
        if(u == v || !seen.insert(key).second) {
            return false;
        }
        pairs.emplace_back(u, v);
        return true;
    };
    for(int i = 1; i < n; ++i) {
        add(order[i], order[rng.below(static_cast<std::uint64_t>(i))]);
    }

    const double max_edges = 0.5 * static_cast<double>(n) * (n - 1);
    const auto target = static_cast<std::size_t>(
        std::min(max_edges, std::round(0.5 * n * spec.avg_degree)));
    while(pairs.size() < target) {
        add(static_cast<int>(rng.below(n)), static_cast<int>(rng.below(n)));
    }
    std::sort(pairs.begin(), pairs.end());

    LaplacianData data;
    data.n = n;
    data.pi.reserve(n);
    for(int v = 0; v < n; ++v) {
        data.pi.push_back(rng.log_uniform(spec.pi_lo, spec.pi_hi));
    }
    data.edges.reserve(pairs.size());
    for(const auto& [u, v] : pairs) {
        data.edges.push_back({u, v, rng.log_uniform(spec.weight_lo, spec.weight_hi)});
    }
    return validate(data);
}

std::string describe(const GeneratorSpec& spec)
{
    std::ostringstream out;
    out << "generator " << kGeneratorId << " n=" << spec.n
        << " degree=" << spec.avg_degree << " seed=" << spec.seed
        << " log10_weight=[" << spec.weight_lo << "," << spec.weight_hi << "]"
        << " log10_pi=[" << spec.pi_lo << "," << spec.pi_hi << "]";
    return out.str();
}

}  // namespace rcmc
