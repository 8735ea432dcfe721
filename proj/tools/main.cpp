#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hybridsched/hybridsched.hpp"

namespace {

using namespace hybridsched;

/// Relative outputs land in $HYBRIDSCHED_OUTDIR when it is set.
std::string resolve_output(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("HYBRIDSCHED_OUTDIR");
    if (!dir || !*dir) return path;
    return std::string(dir) + "/" + path;
}

std::vector<std::pair<int, int>> parse_flow_specs(const std::vector<std::string>& specs) {
    std::vector<std::pair<int, int>> flows;
    for (const std::string& s : specs) {
        auto sep = s.find('x');
        if (sep == std::string::npos) throw std::runtime_error("flow spec must look like 4x12: " + s);
        flows.emplace_back(std::stoi(s.substr(0, sep)), std::stoi(s.substr(sep + 1)));
    }
    return flows;
}

int cmd_gen(int n, int num_large, int num_medium, double c_small, bool noise, std::uint64_t seed,
            const std::string& output) {
    TrafficGenConfig cfg;
    cfg.n = n;
    cfg.num_large = num_large;
    cfg.num_medium = num_medium;
    cfg.load_medium = c_small;
    cfg.load_large = 1.0 - c_small;
    cfg.flow_noise = noise;
    cfg.mice_noise = noise;
    cfg.seed = seed;
    DemandMatrix d = generate_demand(cfg);
    std::string path = resolve_output(output);
    save_demand(path, d);
    std::cout << "wrote " << path << " (n=" << n << ", max_load=" << format_double(max_load(d)) << ")\n";
    return 0;
}

int cmd_run(const std::string& algorithm, const std::string& demand_path, double delta, double ratio,
            const std::string& search, int stride, const std::string& output, const std::string& ledger_path) {
    DemandMatrix demand = load_demand(demand_path);
    SystemParams params = SystemParams::from_ratio(demand.size(), delta, ratio);
    SearchStrategy strategy;
    if (search == "bitonic")
        strategy = SearchStrategy::bitonic();
    else if (search == "full")
        strategy = SearchStrategy::full_scan();
    else if (search == "sampled")
        strategy = SearchStrategy::sampled(stride);
    else
        throw std::runtime_error("unknown search mode: " + search);

    SingleRun run = run_single(algorithm, demand, params, strategy);
    std::string path = resolve_output(output);
    write_text_file(path, run.schedule_json.dump(2) + "\n");
    if (!ledger_path.empty()) {
        if (algorithm != "twohop") throw std::runtime_error("--ledger is only produced by twohop");
        write_text_file(resolve_output(ledger_path), run.ledger_jsonl);
    }
    std::cout << "T=" << format_double(run.metrics.total_time) << " K=" << run.metrics.configurations
              << " wall_ms=" << format_double(run.metrics.wall_ms) << "\n";
    if (!run.report.ok()) {
        std::cerr << "validation failed:\n" << report_to_json(run.report).dump(2) << "\n";
        return 1;
    }
    return 0;
}

void load_experiment_file(const std::string& path, ExperimentConfig& cfg) {
    json j = json::parse(read_text_file(path));
    if (j.contains("algorithms")) cfg.algorithms = j["algorithms"].get<std::vector<std::string>>();
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("runs")) cfg.runs = j["runs"].get<int>();
    if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("delta")) cfg.deltas = j["delta"].get<std::vector<double>>();
    if (j.contains("ratio")) cfg.ratios = j["ratio"].get<std::vector<double>>();
    if (j.contains("flows")) {
        cfg.flows.clear();
        for (const json& f : j["flows"]) cfg.flows.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
    }
    if (j.contains("c_small")) cfg.small_shares = j["c_small"].get<std::vector<double>>();
    if (j.contains("stride")) cfg.strides = j["stride"].get<std::vector<int>>();
    if (j.contains("noise")) cfg.noise = j["noise"].get<bool>();
    if (j.contains("record_wall_time")) cfg.record_wall_time = j["record_wall_time"].get<bool>();
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
}

int cmd_validate(const std::string& demand_path, const std::string& schedule_path, const std::string& ledger_path,
                 double delta, double ratio) {
    DemandMatrix demand = load_demand(demand_path);
    SystemParams params = SystemParams::from_ratio(demand.size(), delta, ratio);
    json sj = json::parse(read_text_file(schedule_path));
    ValidationReport report;
    if (sj.contains("connections")) {
        report = validate(demand, event_schedule_from_json(sj), params);
    } else {
        Schedule schedule = schedule_from_json(sj, demand.size());
        if (!ledger_path.empty()) {
            std::istringstream ss(read_text_file(ledger_path));
            BookingLedger ledger = ledger_from_jsonl(ss);
            report = validate(demand, schedule, ledger, params);
        } else {
            report = validate(demand, schedule, params);
        }
    }
    std::cout << report_to_json(report).dump(2) << "\n";
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid circuit/packet switch scheduling toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic demand matrix");
    int gen_n = 100, gen_large = 4, gen_medium = 12;
    double gen_c_small = 0.3;
    bool gen_no_noise = false;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "demand.csv";
    gen->add_option("-n,--ports", gen_n, "port count");
    gen->add_option("--n-large", gen_large, "large flows per row");
    gen->add_option("--n-medium", gen_medium, "medium flows per row");
    gen->add_option("--c-small", gen_c_small, "traffic share of medium flows");
    gen->add_flag("--no-noise", gen_no_noise, "disable both noise terms");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("-o,--output", gen_out, "output file (.csv or .json)");

    // run
    auto* run = app.add_subcommand("run", "schedule one demand matrix");
    std::string run_algo, run_demand, run_search = "bitonic", run_out = "schedule.json", run_ledger;
    double run_delta = 0.01, run_ratio = 10.0;
    int run_stride = 1;
    run->add_option("-a,--algo", run_algo, "eclipse | twohop | bff")->required();
    run->add_option("-d,--demand", run_demand, "demand file")->required();
    run->add_option("--delta", run_delta, "reconfiguration delay");
    run->add_option("--ratio", run_ratio, "circuit/packet rate ratio");
    run->add_option("--search", run_search, "bitonic | full | sampled");
    run->add_option("--stride", run_stride, "sampling stride for --search sampled");
    run->add_option("-o,--output", run_out, "schedule output file");
    run->add_option("--ledger", run_ledger, "booking ledger output (twohop)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
    std::string sweep_config;
    ExperimentConfig cfg;
    std::vector<std::string> sweep_algos, sweep_flows;
    std::vector<double> sweep_deltas, sweep_ratios, sweep_c_small;
    std::vector<int> sweep_strides;
    int sweep_n = 0, sweep_runs = 0, sweep_workers = -1;
    std::uint64_t sweep_seed = 0;
    bool sweep_no_noise = false, sweep_no_timing = false;
    std::string sweep_out;
    sweep->add_option("-c,--config", sweep_config, "experiment config (JSON)");
    sweep->add_option("--algos", sweep_algos, "algorithms to run");
    sweep->add_option("-n,--ports", sweep_n, "port count");
    sweep->add_option("--runs", sweep_runs, "runs per grid cell");
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--delta", sweep_deltas, "delta grid");
    sweep->add_option("--ratio", sweep_ratios, "rate ratio grid");
    sweep->add_option("--flows", sweep_flows, "flow grid entries, e.g. 4x12");
    sweep->add_option("--c-small", sweep_c_small, "medium-flow share grid");
    sweep->add_option("--stride", sweep_strides, "search grid: 0=bitonic, 1=full, m=sampled");
    sweep->add_flag("--no-noise", sweep_no_noise, "disable demand noise");
    sweep->add_flag("--no-timing", sweep_no_timing, "zero wall times for reproducible files");
    sweep->add_option("-o,--output", sweep_out, "output basename");
    sweep->add_option("--workers", sweep_workers, "worker threads (0 = all cores)");

    // validate
    auto* val = app.add_subcommand("validate", "audit a schedule file");
    std::string val_demand, val_schedule, val_ledger;
    double val_delta = 0.01, val_ratio = 10.0;
    val->add_option("-d,--demand", val_demand, "demand file")->required();
    val->add_option("-s,--schedule", val_schedule, "schedule file")->required();
    val->add_option("--ledger", val_ledger, "booking ledger (twohop schedules)");
    val->add_option("--delta", val_delta, "reconfiguration delay");
    val->add_option("--ratio", val_ratio, "circuit/packet rate ratio");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_n, gen_large, gen_medium, gen_c_small, !gen_no_noise, gen_seed, gen_out);
        if (run->parsed())
            return cmd_run(run_algo, run_demand, run_delta, run_ratio, run_search, run_stride, run_out, run_ledger);
        if (sweep->parsed()) {
            if (!sweep_config.empty()) load_experiment_file(sweep_config, cfg);
            if (!sweep_algos.empty()) cfg.algorithms = sweep_algos;
            if (sweep_n > 0) cfg.n = sweep_n;
            if (sweep_runs > 0) cfg.runs = sweep_runs;
            if (sweep->count("--seed")) cfg.base_seed = sweep_seed;
            if (!sweep_deltas.empty()) cfg.deltas = sweep_deltas;
            if (!sweep_ratios.empty()) cfg.ratios = sweep_ratios;
            if (!sweep_flows.empty()) cfg.flows = parse_flow_specs(sweep_flows);
            if (!sweep_c_small.empty()) cfg.small_shares = sweep_c_small;
            if (!sweep_strides.empty()) cfg.strides = sweep_strides;
            if (sweep_no_noise) cfg.noise = false;
            if (sweep_no_timing) cfg.record_wall_time = false;
            if (!sweep_out.empty()) cfg.output = sweep_out;
            if (sweep_workers >= 0) cfg.workers = sweep_workers;
            cfg.output = resolve_output(cfg.output);
            SweepOutput out = run_sweep(cfg);
            std::cout << "wrote " << out.csv_path << " and " << out.summary_path << " (" << out.rows.size()
                      << " rows)\n";
            if (out.violation_count > 0) {
                std::cerr << out.violation_count << " validation violations\n";
                return 1;
            }
            return 0;
        }
        if (val->parsed()) return cmd_validate(val_demand, val_schedule, val_ledger, val_delta, val_ratio);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
