#ifndef RCMC_HARNESS_HPP
#define RCMC_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rcmc/cholesky.hpp"
#include "rcmc/counters.hpp"
#include "rcmc/greedy.hpp"
#include "rcmc/kinetics.hpp"
#include "rcmc/projection.hpp"
#include "rcmc/stable_lazy.hpp"

namespace rcmc
{

inline constexpr int kReportVersion   = 1;
inline constexpr double kDefaultTMax  = 86400.0;
// Trajectory rows switch to sparse "v:value" pairs above this many states.
inline constexpr int kDenseCsvLimit = 10000;

enum class Method
{
    greedy,
    fast,
    lazyfast,
    stable,
    relaxed,
};

inline constexpr Method kAllMethods[] = {
    Method::greedy, Method::fast, Method::lazyfast, Method::stable, Method::relaxed};

std::string_view to_string(Method method);

/// Throws InvalidArgument for unknown names.
Method parse_method(std::string_view name);

/// Step-1 output of any method together with its measured wall time.
struct Step1Run
{
    Method method = Method::greedy;
    GreedyResult result;
    CholeskyFactor factor;
    std::optional<InstrumentationCounters> counters;
    std::int64_t clamp_events = 0;
    double seconds            = 0.0;
};

/// eps_relax is only used by Method::relaxed.
Step1Run run_step1(const RateConstantMatrix& K,
                   Method method,
                   double t_max,
                   double eps_relax = kDefaultRelaxEps);

/// Order-sensitive FNV-1a digest of the 1-based pivot sequence.
std::uint64_t pivots_digest(std::span<const int> pivots);

/// First 1-based j where the sequences differ (a missing entry counts as a
/// difference); none when they are identical.
std::optional<int> divergence_index(std::span<const int> reference,
                                    std::span<const int> pivots);

struct RunReport
{
    Method method = Method::greedy;
    int n         = 0;
    double t_max  = kDefaultTMax;
    std::optional<double> eps_relax;
    std::vector<int> pivots;  // 0-based
    std::uint64_t digest = 0;
    double t_step1       = 0.0;
    std::optional<double> t_step2;
    std::vector<double> tau;  // per-j Step-2 wall times
    std::optional<InstrumentationCounters> counters;
    std::int64_t clamp_events = 0;
    std::optional<int> divergence_index;

    int k() const noexcept { return static_cast<int>(pivots.size()); }
};

RunReport make_report(const Step1Run& run, int n, double t_max, double eps_relax);

/// Counter envelopes applicable to the report's method, if any.
std::optional<Envelope> offdiag_bounds(const RunReport& report);
std::optional<Envelope> diag_bounds(const RunReport& report);

nlohmann::json to_json(const RunReport& report, bool with_pivots);

/// "uniform", "point:IDX" (1-based) or "file:PATH" (whitespace-separated
/// values). Throws InvalidArgument or ParseError.
YieldVector make_initial(std::string_view source, int n);

struct SimulateOutput
{
    Trajectory trajectory;
    RunReport report;
};

SimulateOutput simulate(const RateConstantMatrix& K,
                        const YieldVector& p,
                        Method method,
                        TrajectoryMode mode,
                        double t_max,
                        double eps_relax = kDefaultRelaxEps);

/// Columns j, t_seconds, q_1..q_n; rows above kDenseCsvLimit states list
/// only nonzero yields as "v:value".
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, int n);

/// Runs every method once (greedy is added as the reference when absent)
/// and fills divergence_index against greedy. Throws InvalidArgument for
/// fewer than two distinct methods.
std::vector<RunReport> compare(const RateConstantMatrix& K,
                               std::span<const Method> methods,
                               double t_max,
                               double eps_relax = kDefaultRelaxEps);

nlohmann::json comparison_json(const std::vector<RunReport>& reports);

struct BenchRow
{
    std::string instance;
    RunReport report;
    std::optional<double> speedup;  // t_step1(greedy) / t_step1(method)
};

struct BenchInstance
{
    std::string name;
    const RateConstantMatrix* K;
};

/// One row per (instance, t_max, method), in that nesting order. Step 2 is
/// timed in full mode with a point mass at state 1.
std::vector<BenchRow> bench(std::span<const BenchInstance> instances,
                            std::span<const double> t_max_grid,
                            std::span<const Method> methods,
                            double eps_relax = kDefaultRelaxEps);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace rcmc

#endif
