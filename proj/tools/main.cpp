// safectrl: benchmark harness for energy-function safe controllers.
//
// Subcommands: gen-scenarios | run | sweep | phase | compare.
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "safectrl/io.hpp"
#include "safectrl/metrics.hpp"
#include "safectrl/phase.hpp"
#include "safectrl/scenario.hpp"
#include "safectrl/sweep.hpp"

using namespace safectrl;

namespace {

struct CommonOptions {
    std::string model = "ball";
    std::string algorithm = "ssa";
    std::string human = "passive";
    double dmin = 1.0;
    double k = 1.0;
    double c1 = 1.0;
    double c2 = 3.0;
    double eta = -0.1;
    double lambda = -1.0;
    bool perfect_sensing = false;
    double noise_sigma = 0.01;
    double d_s = 2.0;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_algorithm = true) {
    cmd->add_option("--model", opt.model, "Robot model: ball|unicycle|scara|arm4dof")
        ->check(CLI::IsMember({"ball", "unicycle", "scara", "arm4dof", "arm"}));
    if (with_algorithm)
        cmd->add_option("--alg", opt.algorithm, "Algorithm: pfm|sma|ssa|bfm|sss|all")
            ->check(CLI::IsMember({"pfm", "sma", "ssa", "bfm", "sss", "all"}));
    cmd->add_option("--human", opt.human, "Human model: passive|goalseek|interactive")
        ->check(CLI::IsMember({"passive", "goalseek", "interactive"}));
    cmd->add_option("--dmin", opt.dmin, "Safety index d_min [m]");
    cmd->add_option("--k", opt.k, "Safety index velocity weight k [s]");
    cmd->add_option("--c1", opt.c1, "PFM gain");
    cmd->add_option("--c2", opt.c2, "SMA gain");
    cmd->add_option("--eta", opt.eta, "SSA slack (<= 0)");
    cmd->add_option("--lambda", opt.lambda, "BFM/SSS rate (< 0)");
    cmd->add_flag("--perfect-sensing", opt.perfect_sensing, "Bypass the Kalman filter");
    cmd->add_option("--noise-sigma", opt.noise_sigma, "Measurement noise sigma [m]");
    cmd->add_option("--ds", opt.d_s, "Safety score distance threshold [m]");
}

ControllerConfig make_controller(const CommonOptions& opt, Algorithm alg) {
    ControllerConfig cfg;
    cfg.algorithm = alg;
    cfg.c1 = opt.c1;
    cfg.c2 = opt.c2;
    cfg.eta = opt.eta;
    cfg.lambda = opt.lambda;
    cfg.safety_params = {opt.dmin, opt.k};
    cfg.validate();
    return cfg;
}

EpisodeConfig make_episode_config(const CommonOptions& opt, Algorithm alg) {
    EpisodeConfig cfg;
    cfg.model = RobotModel::from_name(opt.model);
    cfg.controller = make_controller(opt, alg);
    cfg.human.kind = human_kind_from_name(opt.human);
    cfg.estimation.perfect_sensing = opt.perfect_sensing;
    cfg.estimation.meas_sigma = opt.noise_sigma;
    return cfg;
}

std::vector<Algorithm> parse_algorithms(const std::string& name) {
    if (name == "all")
        return {Algorithm::PFM, Algorithm::SMA, Algorithm::SSA, Algorithm::BFM, Algorithm::SSS};
    return {algorithm_from_name(name)};
}

int cmd_run(const CommonOptions& opt, const std::string& scenario_path,
            const std::string& out_path, const std::string& log_dir) {
    const auto scenarios = read_scenarios_json(scenario_path);
    const auto algorithms = parse_algorithms(opt.algorithm);

    std::vector<ResultRow> rows;
    bool any_invalid = false;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        for (Algorithm alg : algorithms) {
            const auto cfg = make_episode_config(opt, alg);
            const EpisodeLog log = run_episode(cfg, scenarios[i]);
            if (!log.valid) {
                any_invalid = true;
                std::cerr << "invalid episode: scenario " << i << " alg "
                          << algorithm_name(alg) << ": " << log.diagnostics << "\n";
            }
            const MetricsReport m = evaluate_episode(log, opt.d_s);
            ResultRow row;
            row.scenario = static_cast<int>(i);
            row.algorithm = algorithm_name(alg);
            row.d_min = cfg.controller.safety_params.d_min;
            row.k = cfg.controller.safety_params.k;
            row.param = cfg.controller.algorithm_param();
            row.efficiency = m.efficiency;
            row.safety = m.safety;
            row.collided = m.collided;
            row.intervention_rate = m.intervention_rate;
            rows.push_back(std::move(row));

            if (!log_dir.empty()) {
                std::filesystem::create_directories(log_dir);
                char name[64];
                std::snprintf(name, sizeof name, "ep_%03zu_%s.jsonl", i, algorithm_name(alg));
                write_episode_jsonl((std::filesystem::path(log_dir) / name).string(), log);
            }
        }
    }
    write_results_csv(out_path, rows);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return any_invalid ? 2 : 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& scenario_path,
              const std::vector<double>& dmin_grid, const std::vector<double>& k_grid,
              const std::vector<double>& param_grid, const std::string& points_path,
              const std::string& frontier_path, int threads) {
    const auto scenarios = read_scenarios_json(scenario_path);
    SweepSpec spec;
    spec.model = RobotModel::from_name(opt.model);
    spec.algorithm = algorithm_from_name(opt.algorithm);
    if (!dmin_grid.empty()) spec.dmin_grid = dmin_grid;
    if (!k_grid.empty()) spec.k_grid = k_grid;
    spec.param_grid = param_grid;  // empty -> per-algorithm defaults
    spec.human.kind = human_kind_from_name(opt.human);
    spec.estimation.perfect_sensing = opt.perfect_sensing;
    spec.estimation.meas_sigma = opt.noise_sigma;
    spec.d_s = opt.d_s;

    const SweepResult result = tradeoff_sweep(spec, scenarios, threads);
    write_sweep_points_csv(points_path, algorithm_name(spec.algorithm), result.points);
    write_frontier_csv(frontier_path, algorithm_name(spec.algorithm), result.points,
                       result.frontier);
    std::cout << "points: " << result.points.size() << " -> " << points_path << "\n";
    std::cout << "frontier: " << result.frontier.size() << " -> " << frontier_path << "\n";
    std::cout << "hybrid score: "
              << (result.hybrid ? fmt_double(*result.hybrid) : std::string("null")) << "\n";
    return 0;
}

int cmd_phase(const CommonOptions& opt, const PhaseSliceSpec& slice,
              const std::string& out_path) {
    const Algorithm alg = algorithm_from_name(opt.algorithm);
    const auto grid = phase_portrait(make_controller(opt, alg), slice);
    write_phase_csv(out_path, grid);
    std::cout << "wrote " << grid.size() << " grid points to " << out_path << "\n";
    return 0;
}

int cmd_compare(const CommonOptions& opt, const std::string& scenario_path,
                const std::string& out_path) {
    const auto scenarios = read_scenarios_json(scenario_path);
    std::printf("%-6s %12s %12s %12s %12s\n", "alg", "efficiency", "safety", "collisions",
                "intervention");
    std::vector<ResultRow> rows;
    for (Algorithm alg : parse_algorithms("all")) {
        const auto cfg = make_episode_config(opt, alg);
        double eff = 0.0, safety = 0.0, rate = 0.0;
        int collisions = 0;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            const auto log = run_episode(cfg, scenarios[i]);
            const auto m = evaluate_episode(log, opt.d_s);
            eff += m.efficiency;
            safety += m.safety;
            rate += m.intervention_rate;
            if (m.collided) ++collisions;
            ResultRow row;
            row.scenario = static_cast<int>(i);
            row.algorithm = algorithm_name(alg);
            row.d_min = cfg.controller.safety_params.d_min;
            row.k = cfg.controller.safety_params.k;
            row.param = cfg.controller.algorithm_param();
            row.efficiency = m.efficiency;
            row.safety = m.safety;
            row.collided = m.collided;
            row.intervention_rate = m.intervention_rate;
            rows.push_back(std::move(row));
        }
        const double n = static_cast<double>(scenarios.size());
        std::printf("%-6s %12.3f %12.3f %12d %12.3f\n", algorithm_name(alg), eff / n,
                    safety / n, collisions, rate / n);
    }
    if (!out_path.empty()) {
        write_results_csv(out_path, rows);
        std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for energy-function safe controllers"};
    app.require_subcommand(1);
    // options come from [subcommand] sections, e.g. [run] dmin=2.0
    app.set_config("--config", "", "Read options from an INI file");

    // gen-scenarios
    auto* gen = app.add_subcommand("gen-scenarios", "Generate a scenario file");
    std::uint64_t seed = 0;
    int count = 40;
    std::string gen_out = "scenarios.json";
    Workspace ws;
    gen->add_option("--seed", seed, "Master seed")->required();
    gen->add_option("--count", count, "Number of scenarios")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output JSON path");
    gen->add_option("--xmin", ws.xmin, "Workspace x minimum");
    gen->add_option("--xmax", ws.xmax, "Workspace x maximum");
    gen->add_option("--ymin", ws.ymin, "Workspace y minimum");
    gen->add_option("--ymax", ws.ymax, "Workspace y maximum");

    // run
    auto* run = app.add_subcommand("run", "Run episodes and emit per-episode metrics");
    CommonOptions run_opt;
    std::string run_scenarios, run_out = "results.csv", run_logs;
    add_common(run, run_opt);
    run->add_option("--scenarios", run_scenarios, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Results CSV path");
    run->add_option("--log-dir", run_logs, "Directory for JSONL trajectory logs");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep with trade-off frontier");
    CommonOptions sweep_opt;
    std::string sweep_scenarios, points_out = "sweep_points.csv",
                                 frontier_out = "sweep_frontier.csv";
    std::vector<double> dmin_grid, k_grid, param_grid;
    int threads = 0;
    add_common(sweep, sweep_opt);
    sweep->add_option("--scenarios", sweep_scenarios, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--dmin-grid", dmin_grid, "d_min grid values")->delimiter(',');
    sweep->add_option("--k-grid", k_grid, "k grid values")->delimiter(',');
    sweep->add_option("--param-grid", param_grid, "Algorithm parameter grid")->delimiter(',');
    sweep->add_option("--out-points", points_out, "All sweep points CSV");
    sweep->add_option("--out-frontier", frontier_out, "Frontier CSV");
    sweep->add_option("--threads", threads, "Worker threads (0 = auto)");

    // phase
    auto* phase = app.add_subcommand("phase", "Phase-portrait grid for a ball slice");
    CommonOptions phase_opt;
    PhaseSliceSpec slice;
    std::string phase_out = "phase.csv";
    int resolution = 41;
    add_common(phase, phase_opt);
    phase->add_option("--vx", slice.velocity.x(), "Slice velocity x");
    phase->add_option("--vy", slice.velocity.y(), "Slice velocity y");
    phase->add_option("--obstacle-x", slice.obstacle_position.x(), "Obstacle x");
    phase->add_option("--obstacle-y", slice.obstacle_position.y(), "Obstacle y");
    phase->add_option("--goal-x", slice.goal.x(), "Reference goal x");
    phase->add_option("--goal-y", slice.goal.y(), "Reference goal y");
    phase->add_option("--xmin", slice.xmin, "Grid x minimum");
    phase->add_option("--xmax", slice.xmax, "Grid x maximum");
    phase->add_option("--ymin", slice.ymin, "Grid y minimum");
    phase->add_option("--ymax", slice.ymax, "Grid y maximum");
    phase->add_option("--res", resolution, "Grid resolution per axis")
        ->check(CLI::PositiveNumber);
    phase->add_option("--out", phase_out, "Grid CSV path");

    // compare
    auto* compare = app.add_subcommand("compare", "Run all five algorithms and tabulate");
    CommonOptions cmp_opt;
    std::string cmp_scenarios, cmp_out;
    add_common(compare, cmp_opt, false);
    compare->add_option("--scenarios", cmp_scenarios, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--out", cmp_out, "Optional results CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            const auto scenarios = generate_scenarios(seed, count, ws);
            write_scenarios_json(gen_out, scenarios);
            std::cout << "wrote " << scenarios.size() << " scenarios (seed " << seed << ") to "
                      << gen_out << "\n";
            return 0;
        }
        if (run->parsed()) return cmd_run(run_opt, run_scenarios, run_out, run_logs);
        if (sweep->parsed())
            return cmd_sweep(sweep_opt, sweep_scenarios, dmin_grid, k_grid, param_grid,
                             points_out, frontier_out, threads);
        if (phase->parsed()) {
            slice.resolution_x = resolution;
            slice.resolution_y = resolution;
            return cmd_phase(phase_opt, slice, phase_out);
        }
        if (compare->parsed()) return cmd_compare(cmp_opt, cmp_scenarios, cmp_out);
    } catch (const RejectedInputError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
