#include "rcmc/counters.hpp"

#include <numeric>
#include <sstream>

namespace rcmc
{

Envelope offdiag_envelope(std::int64_t k, std::int64_t n)
{
    return {k * (k - 1) * (k + 1) / 6, k * (k - 1) * (3 * n - 2 * k - 2) / 6};
}

Envelope diag_envelope(std::int64_t k, std::int64_t n)
{
    // sum_{j<=k+1} j(j-1)/2 * c_j with 1 <= c_j <= n-j+2
    return {k * (k + 1) * (k + 2) / 6,
            k * (k + 1) * (k + 2) * (4 * n - 3 * k + 3) / 24};
}

Envelope relaxed_diag_envelope(const std::vector<std::int64_t>& c)
{
    Envelope env{0, 0};
    for(std::size_t i = 0; i < c.size(); ++i) {
        const auto j = static_cast<std::int64_t>(i + 1);
        env.lo += (j - 1) * c[i];
        env.hi += j * (j - 1) * c[i] / 2;
    }
    return env;
}

namespace
{

template<class... Args>
std::string message(Args&&... args)
{
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

}  // namespace

std::vector<std::string> check_counters(const InstrumentationCounters& counters,
                                        std::int64_t k,
                                        std::int64_t n,
                                        bool stable,
                                        bool relaxed)
{
    std::vector<std::string> errors;
    const auto& c = counters.c;
    const auto& b = counters.b;

    const auto iterations = static_cast<std::int64_t>(c.size());
    if(iterations != (k < n ? k + 1 : k)) {
        errors.push_back(message("expected ", k < n ? k + 1 : k,
                                 " iteration indices, got ", iterations));
    }
    if(!c.empty() && c[0] != 1) {
        errors.push_back(message("c_1 = ", c[0], " != 1"));
    }
    // Each transient state is refreshed at most once per iteration, and one
    // more pop may be needed to re-pop a state that is already fresh.
    for(std::int64_t j = 2; j <= iterations; ++j) {
        const auto cj = c[j - 1];
        if(cj < 1 || cj > n - j + 2) {
            errors.push_back(message("c_", j, " = ", cj, " outside [1, ",
                                     n - j + 2, "]"));
        }
    }

    std::int64_t sum_b     = 0;
    std::int64_t offdiag   = 0;
    for(std::size_t v = 0; v < b.size(); ++v) {
        if(b[v] < 0 || b[v] > k) {
            errors.push_back(message("b_", v + 1, " = ", b[v],
                                     " outside [0, ", k, "]"));
        }
        sum_b += b[v];
        offdiag += b[v] * (b[v] - 1) / 2;
    }
    if(counters.m_offdiag != offdiag) {
        errors.push_back(message("M_offdiag = ", counters.m_offdiag,
                                 " != sum b_v(b_v-1)/2 = ", offdiag));
    }

    const std::int64_t sum_c = std::accumulate(c.begin(), c.end(),
                                               std::int64_t{0});
    std::int64_t weighted_c  = 0;
    std::int64_t diag_exact  = 0;
    for(std::int64_t j = 1; j <= iterations; ++j) {
        weighted_c += (j - 1) * c[j - 1];
        diag_exact += j * (j - 1) * c[j - 1] / 2;
    }
    if(counters.heap_pops != sum_c) {
        errors.push_back(message("heap pops ", counters.heap_pops,
                                 " != sum c_j = ", sum_c));
    }
    if(sum_c - 1 > sum_b || sum_b > weighted_c) {
        errors.push_back(message("sum b_v = ", sum_b, " outside [", sum_c - 1,
                                 ", ", weighted_c, "]"));
    }

    const auto off_env = offdiag_envelope(k, n);
    if(counters.m_offdiag < off_env.lo || counters.m_offdiag > off_env.hi) {
        errors.push_back(message("M_offdiag = ", counters.m_offdiag,
                                 " outside [", off_env.lo, ", ", off_env.hi,
                                 "]"));
    }

    if(stable && !relaxed) {
        if(counters.m_diag != diag_exact) {
            errors.push_back(message("M_diag = ", counters.m_diag,
                                     " != sum j(j-1)c_j/2 = ", diag_exact));
        }
        if(k < n) {
            const auto env = diag_envelope(k, n);
            if(counters.m_diag < env.lo || counters.m_diag > env.hi) {
                errors.push_back(message("M_diag = ", counters.m_diag,
                                         " outside [", env.lo, ", ", env.hi,
                                         "]"));
            }
        }
    }
    if(relaxed) {
        const auto env = relaxed_diag_envelope(c);
        if(counters.m_diag < env.lo || counters.m_diag > env.hi) {
            errors.push_back(message("relaxed M_diag = ", counters.m_diag,
                                     " outside [", env.lo, ", ", env.hi,
                                     "]"));
        }
    }
    return errors;
}

}  // namespace rcmc
