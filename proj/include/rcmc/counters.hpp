#ifndef RCMC_COUNTERS_HPP
#define RCMC_COUNTERS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rcmc
{

/// Work counters of the lazy selection methods.
struct InstrumentationCounters
{
    // c[j-1] = number of while iterations run with iteration index j,
    // j = 1..k+1.
    std::vector<std::int64_t> c;
    // Final staleness marker b_v per state.
    std::vector<std::int64_t> b;
    // Total inner-product dimension spent completing off-diagonal entries.
    std::int64_t m_offdiag = 0;
    // Total inner-product dimension spent in the stable diagonal routine.
    std::int64_t m_diag       = 0;
    std::int64_t relax_hits   = 0;
    std::int64_t relax_misses = 0;
    std::int64_t clamp_events = 0;
    std::int64_t heap_pops    = 0;
};

struct Envelope
{
    std::int64_t lo;
    std::int64_t hi;
};

/// k(k-1)(k+1)/6 <= M_offdiag <= k(k-1)(3n-2k-2)/6.
Envelope offdiag_envelope(std::int64_t k, std::int64_t n);

/// k(k+1)(k+2)/6 <= M_diag <= k(k+1)(k+2)(4n-3k+3)/24 (unrelaxed runs).
Envelope diag_envelope(std::int64_t k, std::int64_t n);

/// sum_j (j-1) c_j <= M_diag <= sum_j j(j-1) c_j / 2 for a given c.
Envelope relaxed_diag_envelope(const std::vector<std::int64_t>& c);

/// Checks every counter identity and bound that must hold after a run
/// that accepted k of n states: c_1 = 1, 1 <= c_j <= n-j+2,
/// sum c_j - 1 <= sum b_v <= sum_{j<=k+1} (j-1)c_j, the M_offdiag identity
/// and envelope, and the M_diag identity or envelope. Returns one message
/// per violation.
std::vector<std::string> check_counters(const InstrumentationCounters& counters,
                                        std::int64_t k,
                                        std::int64_t n,
                                        bool stable,
                                        bool relaxed);

}  // namespace rcmc

#endif
