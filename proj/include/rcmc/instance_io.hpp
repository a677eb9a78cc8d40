#ifndef RCMC_INSTANCE_IO_HPP
#define RCMC_INSTANCE_IO_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rcmc/kinetics.hpp"

namespace rcmc
{

// Native instance format (UTF-8, whitespace-delimited, '#' starts a comment
// line):
//
//   n m
//   pi_1
//   ...
//   pi_n
//   u v w      (m lines, 1-based, u < v, w = -L_uv = K_uv pi_v > 0)
//
// Edges with w = 0 are dropped.
//
// Raw-rate format:
//
//   n m
//   pi_1 ... pi_n          (one line)
//   u v K_uv               (m lines, 1-based, both directions present)

/// Throws ParseError with the offending 1-based line number.
LaplacianData parse_native(std::istream& in);
RateData parse_rates(std::istream& in);

RateConstantMatrix read_native(std::istream& in);
RateConstantMatrix read_rates(std::istream& in,
                              double tolerance = kDetailedBalanceTolerance);

RateConstantMatrix load_native(const std::filesystem::path& path);
RateConstantMatrix load_rates(const std::filesystem::path& path,
                              double tolerance = kDetailedBalanceTolerance);

/// Writes the native format with 17 significant digits so a parse of the
/// output reproduces every value. Each header line is emitted as a comment.
void write_native(std::ostream& out,
                  const RateConstantMatrix& K,
                  const std::vector<std::string>& header = {});

}  // namespace rcmc

#endif
