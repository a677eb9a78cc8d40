#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcmc/errors.hpp"
#include "rcmc/generator.hpp"
#include "rcmc/harness.hpp"
#include "rcmc/instance_io.hpp"

namespace
{

using namespace rcmc;

// Writes to the named file, or stdout when the path is empty or "-".
class Output
{
public:
    explicit Output(const std::string& path)
    {
        if(!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if(!*file_) {
                throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
            }
        }
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct InstanceArgs
{
    std::string path;
    bool rates = false;
    double tolerance = kDetailedBalanceTolerance;

    RateConstantMatrix load() const
    {
        return rates ? load_rates(path, tolerance) : load_native(path);
    }
};

void add_instance(CLI::App* cmd, InstanceArgs& args)
{
    cmd->add_option("instance", args.path, "Instance file")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--rates", args.rates, "Read raw rate triples 'u v K_uv' instead of the native format");
    cmd->add_option("--db-tol", args.tolerance, "Detailed-balance tolerance for --rates input");
}

std::vector<Method> parse_methods(const std::string& list)
{
    std::vector<Method> out;
    std::stringstream in(list);
    std::string name;
    while(std::getline(in, name, ',')) {
        if(!name.empty()) {
            out.push_back(parse_method(name));
        }
    }
    return out;
}

TrajectoryMode parse_mode(const std::string& mode)
{
    if(mode == "full") {
        return TrajectoryMode::full;
    }
    if(mode == "last") {
        return TrajectoryMode::last;
    }
    throw Error(ErrorKind::InvalidArgument, "mode must be full or last");
}

nlohmann::json trajectory_json(const Trajectory& trajectory)
{
    auto out = nlohmann::json::array();
    for(const auto& point : trajectory.points) {
        out.push_back({{"j", point.j}, {"t_seconds", point.time}, {"q", point.q}});
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rate constant matrix contraction: steady-state selection and yield projection"};
    app.require_subcommand(1);

    // generate
    GeneratorSpec spec;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a seeded random instance");
    generate->add_option("--n", spec.n, "Number of states")->required();
    generate->add_option("--degree", spec.avg_degree, "Average degree");
    generate->add_option("--seed", spec.seed, "Seed");
    generate->add_option("--weight-lo", spec.weight_lo, "log10 lower bound of edge weights");
    generate->add_option("--weight-hi", spec.weight_hi, "log10 upper bound of edge weights");
    generate->add_option("--pi-lo", spec.pi_lo, "log10 lower bound of pi");
    generate->add_option("--pi-hi", spec.pi_hi, "log10 upper bound of pi");
    generate->add_option("--out", gen_out, "Output path (default stdout)");

    // validate
    InstanceArgs val_args;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate an instance");
    add_instance(validate_cmd, val_args);

    // simulate
    InstanceArgs sim_args;
    std::string sim_method = "relaxed";
    std::string sim_mode   = "full";
    std::string sim_p      = "point:1";
    std::string sim_out;
    std::string sim_report;
    std::string sim_format = "csv";
    double sim_t_max       = kDefaultTMax;
    double sim_eps         = kDefaultRelaxEps;
    auto* simulate_cmd = app.add_subcommand("simulate", "Select steady states and project yields");
    add_instance(simulate_cmd, sim_args);
    simulate_cmd->add_option("--t-max", sim_t_max, "Final time in seconds")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--method", sim_method, "greedy|fast|lazyfast|stable|relaxed");
    simulate_cmd->add_option("--mode", sim_mode, "full|last");
    simulate_cmd->add_option("--eps-relax", sim_eps, "Relaxing tolerance")->check(CLI::NonNegativeNumber);
    simulate_cmd->add_option("--p", sim_p, "uniform|point:IDX|file:PATH");
    simulate_cmd->add_option("--out", sim_out, "Trajectory output (default stdout)");
    simulate_cmd->add_option("--report", sim_report, "Report JSON output");
    simulate_cmd->add_option("--format", sim_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    // compare
    InstanceArgs cmp_args;
    std::string cmp_methods = "greedy,fast,lazyfast,stable,relaxed";
    std::string cmp_out;
    double cmp_t_max = kDefaultTMax;
    double cmp_eps   = kDefaultRelaxEps;
    bool cmp_pivots  = false;
    auto* compare_cmd = app.add_subcommand("compare", "Run several methods against greedy");
    add_instance(compare_cmd, cmp_args);
    compare_cmd->add_option("--t-max", cmp_t_max, "Final time in seconds")->check(CLI::PositiveNumber);
    compare_cmd->add_option("--method,--methods", cmp_methods, "Comma-separated methods");
    compare_cmd->add_option("--eps-relax", cmp_eps, "Relaxing tolerance")->check(CLI::NonNegativeNumber);
    compare_cmd->add_flag("--pivots", cmp_pivots, "Include full pivot lists");
    compare_cmd->add_option("--out", cmp_out, "Report JSON output (default stdout)");

    // bench
    std::vector<std::string> bench_paths;
    std::vector<double> bench_t_max{kDefaultTMax};
    std::string bench_methods = "greedy,fast,lazyfast,stable,relaxed";
    std::string bench_out;
    double bench_eps  = kDefaultRelaxEps;
    bool bench_rates  = false;
    auto* bench_cmd = app.add_subcommand("bench", "Emit timings and counters as CSV");
    bench_cmd->add_option("instances", bench_paths, "Instance files")->required()->check(CLI::ExistingFile);
    bench_cmd->add_flag("--rates", bench_rates, "Read raw rate triples");
    bench_cmd->add_option("--t-max", bench_t_max, "Final times (repeatable)")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--method,--methods", bench_methods, "Comma-separated methods");
    bench_cmd->add_option("--eps-relax", bench_eps, "Relaxing tolerance")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--out", bench_out, "CSV output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if(generate->parsed()) {
            const auto K = rcmc::generate(spec);
            Output out(gen_out);
            write_native(out.stream(), K, {describe(spec)});
        }
        else if(validate_cmd->parsed()) {
            const auto K     = val_args.load();
            const auto comps = connected_components(K.laplacian());
            std::cout << "n=" << K.size() << " m=" << K.laplacian().edge_count()
                      << " components=" << comps.size() << '\n';
        }
        else if(simulate_cmd->parsed()) {
            const auto K = sim_args.load();
            const auto p = make_initial(sim_p, K.size());
            const auto result = rcmc::simulate(K, p, parse_method(sim_method),
                                               parse_mode(sim_mode), sim_t_max, sim_eps);
            Output out(sim_out);
            if(sim_format == "csv") {
                write_trajectory_csv(out.stream(), result.trajectory, K.size());
            }
            else {
                nlohmann::json doc = {{"report", to_json(result.report, true)},
                                      {"trajectory", trajectory_json(result.trajectory)}};
                out.stream() << doc.dump(2) << '\n';
            }
            if(!sim_report.empty()) {
                Output report(sim_report);
                report.stream() << to_json(result.report, true).dump(2) << '\n';
            }
        }
        else if(compare_cmd->parsed()) {
            const auto K       = cmp_args.load();
            const auto methods = parse_methods(cmp_methods);
            const auto reports = rcmc::compare(K, methods, cmp_t_max, cmp_eps);
            auto doc           = comparison_json(reports);
            if(cmp_pivots) {
                for(std::size_t i = 0; i < reports.size(); ++i) {
                    doc["runs"][i] = to_json(reports[i], true);
                }
            }
            Output out(cmp_out);
            out.stream() << doc.dump(2) << '\n';
        }
        else if(bench_cmd->parsed()) {
            std::vector<RateConstantMatrix> matrices;
            matrices.reserve(bench_paths.size());
            for(const auto& path : bench_paths) {
                matrices.push_back(bench_rates ? load_rates(path) : load_native(path));
            }
            std::vector<BenchInstance> instances;
            for(std::size_t i = 0; i < matrices.size(); ++i) {
                instances.push_back({bench_paths[i], &matrices[i]});
            }
            const auto methods = parse_methods(bench_methods);
            const auto rows    = rcmc::bench(instances, bench_t_max, methods, bench_eps);
            Output out(bench_out);
            write_bench_csv(out.stream(), rows);
        }
    }
    catch(const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return 2;
    }
    catch(const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
