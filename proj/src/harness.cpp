#include "rcmc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "rcmc/errors.hpp"
#include "rcmc/lazy_fast.hpp"

namespace rcmc
{

namespace
{

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start)
{
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string hex_digest(std::uint64_t digest)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

}  // namespace

std::string_view to_string(Method method)
{
    switch(method) {
    case Method::greedy:
        return "greedy";
    case Method::fast:
        return "fast";
    case Method::lazyfast:
        return "lazyfast";
    case Method::stable:
        return "stable";
    case Method::relaxed:
        return "relaxed";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    for(const auto method : kAllMethods) {
        if(to_string(method) == name) {
            return method;
        }
    }
    throw Error(ErrorKind::InvalidArgument,
                "unknown method '" + std::string(name)
                    + "' (expected greedy, fast, lazyfast, stable or relaxed)");
}

Step1Run run_step1(const RateConstantMatrix& K,
                   Method method,
                   double t_max,
                   double eps_relax)
{
    Step1Run run;
    run.method       = method;
    const auto start = clock_type::now();
    switch(method) {
    case Method::greedy: {
        auto [result, factor] = greedy_factorized(K, t_max);
        run.result            = std::move(result);
        run.factor            = std::move(factor);
        break;
    }
    case Method::fast: {
        CholeskyStats stats;
        auto [result, factor] = fast_greedy(K, t_max, &stats);
        run.result            = std::move(result);
        run.factor            = std::move(factor);
        run.clamp_events      = stats.clamp_events;
        break;
    }
    case Method::lazyfast:
    case Method::stable:
    case Method::relaxed: {
        LazyResult lazy;
        if(method == Method::lazyfast) {
            lazy = lazy_fast_greedy(K, t_max);
        }
        else {
            StableOptions options;
            if(method == Method::relaxed) {
                options.eps_relax = eps_relax;
            }
            lazy = stable_lazy_fast_greedy(K, t_max, options);
        }
        run.result       = std::move(lazy.result);
        run.factor       = std::move(lazy.factor);
        run.clamp_events = lazy.counters.clamp_events;
        run.counters     = std::move(lazy.counters);
        break;
    }
    }
    run.seconds = seconds_since(start);
    return run;
}

std::uint64_t pivots_digest(std::span<const int> pivots)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for(const int s : pivots) {
        auto v = static_cast<std::uint32_t>(s + 1);
        for(int byte = 0; byte < 4; ++byte) {
            h ^= v & 0xffU;
            h *= 0x100000001b3ULL;
            v >>= 8;
        }
    }
    return h;
}

std::optional<int> divergence_index(std::span<const int> reference,
                                    std::span<const int> pivots)
{
    const auto common = std::min(reference.size(), pivots.size());
    for(std::size_t i = 0; i < common; ++i) {
        if(reference[i] != pivots[i]) {
            return static_cast<int>(i) + 1;
        }
    }
    if(reference.size() != pivots.size()) {
        return static_cast<int>(common) + 1;
    }
    return std::nullopt;
}

RunReport make_report(const Step1Run& run, int n, double t_max, double eps_relax)
{
    RunReport report;
    report.method = run.method;
    report.n      = n;
    report.t_max  = t_max;
    if(run.method == Method::relaxed) {
        report.eps_relax = eps_relax;
    }
    report.pivots       = run.result.pivots;
    report.digest       = pivots_digest(report.pivots);
    report.t_step1      = run.seconds;
    report.counters     = run.counters;
    report.clamp_events = run.clamp_events;
    return report;
}

std::optional<Envelope> offdiag_bounds(const RunReport& report)
{
    if(!report.counters) {
        return std::nullopt;
    }
    return offdiag_envelope(report.k(), report.n);
}

std::optional<Envelope> diag_bounds(const RunReport& report)
{
    if(!report.counters) {
        return std::nullopt;
    }
    if(report.method == Method::stable) {
        return diag_envelope(report.k(), report.n);
    }
    if(report.method == Method::relaxed) {
        return relaxed_diag_envelope(report.counters->c);
    }
    return std::nullopt;
}

namespace
{

nlohmann::json envelope_json(const std::optional<Envelope>& envelope)
{
    if(!envelope) {
        return nullptr;
    }
    return {{"lo", envelope->lo}, {"hi", envelope->hi}};
}

}  // namespace

nlohmann::json to_json(const RunReport& report, bool with_pivots)
{
    nlohmann::json out;
    out["version"] = kReportVersion;
    out["method"]  = std::string(to_string(report.method));
    out["n"]       = report.n;
    out["k"]       = report.k();
    out["t_max"]   = report.t_max;
    out["eps_relax"] =
        report.eps_relax ? nlohmann::json(*report.eps_relax) : nlohmann::json(nullptr);
    out["pivots_digest"] = hex_digest(report.digest);
    if(with_pivots) {
        auto& list = out["pivots"] = nlohmann::json::array();
        for(const int s : report.pivots) {
            list.push_back(s + 1);
        }
    }
    out["t_step1"] = report.t_step1;
    out["t_step2"] =
        report.t_step2 ? nlohmann::json(*report.t_step2) : nlohmann::json(nullptr);
    out["tau"]          = report.tau;
    out["clamp_events"] = report.clamp_events;
    if(report.counters) {
        const auto& c = *report.counters;
        out["counters"] = {
            {"c", c.c},
            {"b", c.b},
            {"m_offdiag", c.m_offdiag},
            {"m_diag", c.m_diag},
            {"relax_hits", c.relax_hits},
            {"relax_misses", c.relax_misses},
            {"heap_pops", c.heap_pops},
            {"clamp_events", c.clamp_events},
        };
    }
    else {
        out["counters"] = nullptr;
    }
    out["bounds"] = {
        {"m_offdiag", envelope_json(offdiag_bounds(report))},
        {"m_diag", envelope_json(diag_bounds(report))},
    };
    out["divergence_index"] = report.divergence_index
                                  ? nlohmann::json(*report.divergence_index)
                                  : nlohmann::json(nullptr);
    return out;
}

YieldVector make_initial(std::string_view source, int n)
{
    if(source == "uniform") {
        return YieldVector(std::vector<double>(n, n > 0 ? 1.0 / n : 0.0));
    }
    if(source.starts_with("point:")) {
        const auto text = source.substr(6);
        long long idx   = 0;
        auto [ptr, ec]  = std::from_chars(text.data(), text.data() + text.size(), idx);
        if(ec != std::errc() || ptr != text.data() + text.size() || idx < 1 || idx > n) {
            throw Error(ErrorKind::InvalidArgument,
                        "point mass index must be in 1.." + std::to_string(n));
        }
        std::vector<double> values(n, 0.0);
        values[idx - 1] = 1.0;
        return YieldVector(std::move(values));
    }
    if(source.starts_with("file:")) {
        const std::string path(source.substr(5));
        std::ifstream in(path);
        if(!in) {
            throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
        }
        std::vector<double> values;
        std::string token;
        while(in >> token) {
            double x       = 0.0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
            if(ec != std::errc() || ptr != token.data() + token.size()) {
                throw Error(ErrorKind::ParseError,
                            "cannot parse yield '" + token + "' in '" + path + "'");
            }
            values.push_back(x);
        }
        if(static_cast<int>(values.size()) != n) {
            throw Error(ErrorKind::InvalidArgument,
                        "expected " + std::to_string(n) + " yields in '" + path
                            + "', got " + std::to_string(values.size()));
        }
        return YieldVector(std::move(values));
    }
    throw Error(ErrorKind::InvalidArgument,
                "p source must be uniform, point:IDX or file:PATH");
}

SimulateOutput simulate(const RateConstantMatrix& K,
                        const YieldVector& p,
                        Method method,
                        TrajectoryMode mode,
                        double t_max,
                        double eps_relax)
{
    const auto run = run_step1(K, method, t_max, eps_relax);
    SimulateOutput out;
    out.report       = make_report(run, K.size(), t_max, eps_relax);
    const auto start = clock_type::now();
    out.trajectory   = project(K, run.result, run.factor, p, mode);
    out.report.t_step2 = seconds_since(start);
    for(const auto& point : out.trajectory.points) {
        out.report.tau.push_back(point.elapsed);
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, int n)
{
    const bool sparse = n > kDenseCsvLimit;
    out << "j,t_seconds";
    if(!sparse) {
        for(int v = 1; v <= n; ++v) {
            out << ",q_" << v;
        }
    }
    else {
        out << ",q";
    }
    out << '\n';
    for(const auto& point : trajectory.points) {
        out << point.j << ',' << format_double(point.time);
        for(int v = 0; v < n; ++v) {
            if(!sparse) {
                out << ',' << format_double(point.q[v]);
            }
            else if(point.q[v] != 0.0) {
                out << ',' << v + 1 << ':' << format_double(point.q[v]);
            }
        }
        out << '\n';
    }
}

namespace
{

std::vector<Method> with_reference(std::span<const Method> methods)
{
    std::vector<Method> out;
    out.push_back(Method::greedy);
    for(const auto method : methods) {
        if(std::find(out.begin(), out.end(), method) == out.end()) {
            out.push_back(method);
        }
    }
    return out;
}

}  // namespace

std::vector<RunReport> compare(const RateConstantMatrix& K,
                               std::span<const Method> methods,
                               double t_max,
                               double eps_relax)
{
    std::vector<Method> distinct;
    for(const auto method : methods) {
        if(std::find(distinct.begin(), distinct.end(), method) == distinct.end()) {
            distinct.push_back(method);
        }
    }
    if(distinct.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "compare needs at least two methods");
    }
    std::vector<RunReport> reports;
    for(const auto method : with_reference(distinct)) {
        reports.push_back(
            make_report(run_step1(K, method, t_max, eps_relax), K.size(), t_max, eps_relax));
    }
    for(auto& report : reports) {
        report.divergence_index = divergence_index(reports.front().pivots, report.pivots);
    }
    return reports;
}

nlohmann::json comparison_json(const std::vector<RunReport>& reports)
{
    nlohmann::json out;
    out["version"]   = kReportVersion;
    out["reference"] = "greedy";
    auto& runs = out["runs"] = nlohmann::json::array();
    for(const auto& report : reports) {
        runs.push_back(to_json(report, false));
    }
    return out;
}

std::vector<BenchRow> bench(std::span<const BenchInstance> instances,
                            std::span<const double> t_max_grid,
                            std::span<const Method> methods,
                            double eps_relax)
{
    std::vector<BenchRow> rows;
    for(const auto& instance : instances) {
        const auto& K = *instance.K;
        std::vector<double> p0(K.size(), 0.0);
        if(K.size() > 0) {
            p0[0] = 1.0;
        }
        const YieldVector p(std::move(p0));
        for(const double t_max : t_max_grid) {
            std::optional<double> t_greedy;
            const auto first = rows.size();
            for(const auto method : methods) {
                auto out = simulate(K, p, method, TrajectoryMode::full, t_max, eps_relax);
                if(method == Method::greedy) {
                    t_greedy = out.report.t_step1;
                }
                rows.push_back({instance.name, std::move(out.report), std::nullopt});
            }
            if(!t_greedy) {
                t_greedy = run_step1(K, Method::greedy, t_max).seconds;
            }
            for(auto row = rows.begin() + static_cast<std::ptrdiff_t>(first); row != rows.end();
                ++row) {
                if(row->report.method != Method::greedy && row->report.t_step1 > 0.0) {
                    row->speedup = *t_greedy / row->report.t_step1;
                }
            }
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows)
{
    out << "instance,method,n,k,t_max,t_step1,t_step2_full,M_offdiag,M_diag,"
           "M_offdiag_lo,M_offdiag_hi,M_diag_lo,M_diag_hi,relax_hits,speedup\n";
    auto opt = [&](bool present, auto value) {
        out << ',';
        if(present) {
            out << value;
        }
    };
    for(const auto& row : rows) {
        const auto& r = row.report;
        const auto off  = offdiag_bounds(r);
        const auto diag = diag_bounds(r);
        const bool stable_diag = r.counters
                                 && (r.method == Method::stable || r.method == Method::relaxed);
        out << row.instance << ',' << to_string(r.method) << ',' << r.n << ',' << r.k()
            << ',' << format_double(r.t_max) << ',' << format_double(r.t_step1);
        opt(r.t_step2.has_value(), r.t_step2 ? format_double(*r.t_step2) : std::string());
        opt(r.counters.has_value(), r.counters ? r.counters->m_offdiag : 0);
        opt(stable_diag, r.counters ? r.counters->m_diag : 0);
        opt(off.has_value(), off ? off->lo : 0);
        opt(off.has_value(), off ? off->hi : 0);
        opt(diag.has_value(), diag ? diag->lo : 0);
        opt(diag.has_value(), diag ? diag->hi : 0);
        opt(stable_diag, r.counters ? r.counters->relax_hits : 0);
        opt(row.speedup.has_value(), row.speedup ? format_double(*row.speedup) : std::string());
        out << '\n';
    }
}

}  // namespace rcmc
