#ifndef RCMC_GENERATOR_HPP
#define RCMC_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "rcmc/kinetics.hpp"

namespace rcmc
{

/// Identity of the pseudo-random stream; written into generated files so
/// fixtures cannot drift silently.
inline constexpr const char* kGeneratorId = "mt19937_64/u53-v1";

/// Random connected network: a uniformly shuffled random spanning tree plus
/// extra distinct edges until the average degree is reached. Edge weights
/// and pi values are 10^x with x uniform in the given log10 ranges.
struct GeneratorSpec
{
    int n                = 16;
    double avg_degree    = 3.0;
    std::uint64_t seed   = 1;
    double weight_lo     = 0.0;
    double weight_hi     = 0.0;
    double pi_lo         = 0.0;
    double pi_hi         = 0.0;
};

/// Throws InvalidSpec on n < 1, inverted ranges or a negative degree.
RateConstantMatrix generate(const GeneratorSpec& spec);

/// One-line description of the spec and the stream identity.
std::string describe(const GeneratorSpec& spec);

}  // namespace rcmc

#endif
