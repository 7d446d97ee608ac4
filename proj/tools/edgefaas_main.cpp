#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "edgefaas/bench/drivers.hpp"

using namespace edgefaas;

namespace {

bench::Scenario resolve_scenario(const std::string& scenario, std::uint64_t seed) {
    if (scenario == "OP" || scenario == "RS" || scenario == "CD" || scenario == "AS")
        return bench::builtin_scenario(scenario, seed);
    bench::Scenario s = bench::load_scenario(scenario);
    s.seed = seed;
    return s;
}

void write_reports(const std::vector<bench::BenchReport>& reports, const std::string& format,
                   const std::string& out) {
    if (out.empty()) {
        std::cout << (format == "json" ? bench::reports_to_json(reports)
                                       : bench::reports_to_csv(reports));
    } else {
        bench::emit_report(reports, bench::format_from_name(format), out);
        std::cout << "wrote " << reports.size() << " report rows to " << out << "\n";
    }
}

void print_cluster(const bench::Scenario& scenario) {
    orchestrator::NodeRegistry registry;
    scenario.populate(registry);
    std::printf("%-14s %-4s %-12s %5s %7s %7s %5s %s\n", "NAME", "SITE", "OVERLAY-IP", "CORES",
                "MEM-GB", "FACTOR", "ALLOC", "ROLE");
    for (const auto& n : registry.nodes())
        std::printf("%-14s %-4s %-12s %5d %7.1f %7.2f %5d %s\n", n.name.c_str(),
                    orchestrator::site_name(n.site).c_str(), n.overlay_ip.str().c_str(),
                    n.cpu_cores, n.memory_gb, n.compute_factor, n.allocated_replicas,
                    n.control_plane ? "control-plane" : "worker");
}

faas::FunctionSpec function_by_name(const std::string& name) {
    if (name == "sentiment") return faas::sentiment_spec();
    if (name == "heavy-classify") return faas::heavy_classify_spec(4);
    throw std::invalid_argument("unknown function (expected sentiment or heavy-classify): " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale serverless edge platform: mesh overlay, scheduler, gateway, "
                 "pub/sub, percolator and the benchmark harness"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string scenario_name = "OP";
    std::uint64_t seed = 1;
    bool paper_scale = false;
    app.add_option("--scenario", scenario_name, "builtin OP|RS|CD|AS or a scenario JSON file")
        ->capture_default_str();
    app.add_option("--seed", seed, "RNG seed for emulation")->capture_default_str();
    app.add_flag("--paper-scale", paper_scale,
                 "full request totals and 15-minute cooldown instead of desk-scale defaults");

    std::string format = "csv";
    std::string out_path;
    app.add_option("--format", format, "csv|json")->capture_default_str();
    app.add_option("--out", out_path, "output path (stdout when omitted)");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "node registry");
    auto* cluster_up = cluster->add_subcommand("up", "load the scenario and list its nodes");
    auto* cluster_status = cluster->add_subcommand("status", "print the registry as a table");

    // deploy
    auto* deploy = app.add_subcommand("deploy", "place a function's replicas");
    std::string deploy_fn = "sentiment";
    std::string policy_name = "resource-count";
    deploy->add_option("function", deploy_fn, "sentiment|heavy-classify")->required();
    deploy->add_option("--policy", policy_name, "resource-count|network-aware")
        ->capture_default_str();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "benchmark drivers");
    auto* b_latency = bench_cmd->add_subcommand("latency", "tunnel round-trip probe");
    std::string lat_from = "OP", lat_to = "test";
    int lat_reps = 500;
    b_latency->add_option("--from", lat_from, "site or 'test'")->capture_default_str();
    b_latency->add_option("--to", lat_to, "site or 'test'")->capture_default_str();
    b_latency->add_option("--reps", lat_reps, "repetitions")->capture_default_str();

    auto* b_faas = bench_cmd->add_subcommand("faas", "function sweep over thread counts");
    std::string faas_fn = "sentiment";
    std::vector<int> faas_threads{1, 8, 32};
    int faas_requests = 0;
    b_faas->add_option("--function", faas_fn, "sentiment|heavy-classify")->capture_default_str();
    b_faas->add_option("--threads", faas_threads, "concurrent client counts")->capture_default_str();
    b_faas->add_option("--requests", faas_requests, "total requests per sweep point (0 = default)");
    b_faas->add_option("--policy", policy_name, "resource-count|network-aware")
        ->capture_default_str();

    auto* b_pubsub = bench_cmd->add_subcommand("pubsub", "N:M broker throughput");
    int ps_pubs = 1, ps_subs = 1, ps_reps = 5;
    std::size_t ps_size = 64, ps_msgs = 10'000;
    b_pubsub->add_option("--pubs", ps_pubs)->capture_default_str();
    b_pubsub->add_option("--subs", ps_subs)->capture_default_str();
    b_pubsub->add_option("--size", ps_size, "message size in bytes")->capture_default_str();
    b_pubsub->add_option("--msgs", ps_msgs, "total messages")->capture_default_str();
    b_pubsub->add_option("--reps", ps_reps, "repetitions to average")->capture_default_str();

    auto* b_percolate = bench_cmd->add_subcommand("percolate", "reverse-query latency");
    std::size_t pc_queries = 1'000, pc_docs = 5'000;
    std::string pc_scoring = "on";
    b_percolate->add_option("--queries", pc_queries)->capture_default_str();
    b_percolate->add_option("--docs", pc_docs)->capture_default_str();
    b_percolate->add_option("--scoring", pc_scoring, "on|off")->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "re-emit a saved JSON report");
    std::string report_in;
    report->add_option("--in", report_in, "report JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        bench::Scenario scenario = resolve_scenario(scenario_name, seed);

        if (cluster->parsed()) {
            if (cluster_up->parsed() || cluster_status->parsed() || true) print_cluster(scenario);
            return 0;
        }
        if (deploy->parsed()) {
            orchestrator::NodeRegistry registry;
            scenario.populate(registry);
            faas::Gateway gateway(registry, nullptr);
            faas::FunctionSpec spec = function_by_name(deploy_fn);
            faas::ScheduleContext context{scenario.tester_rtt_means(), spec.work_units};
            auto placement = gateway.deploy_function(
                spec, orchestrator::policy_from_name(policy_name), context, 0.0);
            std::cout << "deployed " << spec.name << " with policy "
                      << orchestrator::policy_name(placement.policy_used) << ":\n";
            for (const auto& [node, count] : placement.assignments)
                std::cout << "  " << node << " x" << count << "\n";
            return 0;
        }
        if (b_latency->parsed()) {
            auto r = bench::run_latency_bench(scenario, lat_from, lat_to, lat_reps);
            write_reports({r}, format, out_path);
            return 0;
        }
        if (b_faas->parsed()) {
            faas::FunctionSpec spec = function_by_name(faas_fn);
            bench::FaasBenchOptions options;
            options.thread_counts = faas_threads;
            options.policy = orchestrator::policy_from_name(policy_name);
            bool heavy = spec.kind == faas::WorkloadKind::HeavyClassify;
            options.total_requests = faas_requests > 0 ? faas_requests
                                     : paper_scale     ? (heavy ? 25'000 : 200'000)
                                                       : (heavy ? 250 : 2'000);
            options.cooldown_ms = paper_scale ? 900'000.0 : 30'000.0;
            auto points = bench::run_faas_bench(scenario, spec, options);
            std::vector<bench::BenchReport> reports;
            for (auto& p : points) reports.push_back(p.report);
            write_reports(reports, format, out_path);
            return 0;
        }
        if (b_pubsub->parsed()) {
            auto r = bench::run_pubsub_bench(scenario, ps_pubs, ps_subs, ps_size, ps_msgs, ps_reps);
            write_reports(r.reports(scenario.name), format, out_path);
            return 0;
        }
        if (b_percolate->parsed()) {
            auto r = bench::run_percolate_bench(scenario, pc_queries, pc_docs, pc_scoring == "on");
            write_reports({r.report}, format, out_path);
            return 0;
        }
        if (report->parsed()) {
            std::ifstream f(report_in);
            if (!f) throw bench::IoError("cannot open: " + report_in);
            std::stringstream buf;
            buf << f.rdbuf();
            write_reports(bench::reports_from_json(buf.str()), format, out_path);
            return 0;
        }
        std::cerr << "no subcommand action\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
