#include "safectrl/scenario.hpp"

#include <fstream>

#include "json.hpp"
#include "safectrl/rng.hpp"

namespace safectrl {

namespace {
constexpr int kGoalsPerAgent = 32;
}

std::vector<Scenario> generate_scenarios(std::uint64_t master_seed, int n,
                                         const Workspace& ws) {
    if (n < 1) throw RejectedInputError("scenario count must be >= 1");
    if (!(ws.xmax > ws.xmin) || !(ws.ymax > ws.ymin))
        throw RejectedInputError("degenerate workspace");

    const double mx = 0.1 * (ws.xmax - ws.xmin);
    const double my = 0.1 * (ws.ymax - ws.ymin);

    std::vector<Scenario> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Scenario sc;
        sc.seed = Rng::mix(master_seed, static_cast<std::uint64_t>(i));
        sc.workspace = ws;
        Rng rng(sc.seed);
        for (int g = 0; g < kGoalsPerAgent; ++g)
            sc.robot_goals.emplace_back(rng.uniform(ws.xmin + mx, ws.xmax - mx),
                                        rng.uniform(ws.ymin + my, ws.ymax - my));
        for (int g = 0; g < kGoalsPerAgent; ++g)
            sc.human_goals.emplace_back(rng.uniform(ws.xmin + mx, ws.xmax - mx),
                                        rng.uniform(ws.ymin + my, ws.ymax - my));
        out.push_back(std::move(sc));
    }
    return out;
}

void write_scenarios_json(const std::string& path, const std::vector<Scenario>& scenarios) {
    nlohmann::json root;
    auto& arr = root["scenarios"];
    arr = nlohmann::json::array();
    for (const auto& sc : scenarios) {
        nlohmann::json j;
        j["seed"] = sc.seed;
        j["duration"] = sc.duration;
        j["fps"] = sc.fps;
        j["workspace"] = {sc.workspace.xmin, sc.workspace.ymin, sc.workspace.xmax,
                          sc.workspace.ymax};
        auto goals = [](const std::vector<Eigen::Vector2d>& gs) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& g : gs) a.push_back({g.x(), g.y()});
            return a;
        };
        j["robot_goals"] = goals(sc.robot_goals);
        j["human_goals"] = goals(sc.human_goals);
        arr.push_back(std::move(j));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << root.dump(2) << "\n";
}

std::vector<Scenario> read_scenarios_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json root;
    in >> root;

    std::vector<Scenario> out;
    for (const auto& j : root.at("scenarios")) {
        Scenario sc;
        sc.seed = j.at("seed").get<std::uint64_t>();
        sc.duration = j.at("duration").get<double>();
        sc.fps = j.at("fps").get<double>();
        const auto& w = j.at("workspace");
        sc.workspace = {w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>(),
                        w.at(3).get<double>()};
        auto goals = [](const nlohmann::json& a) {
            std::vector<Eigen::Vector2d> gs;
            for (const auto& g : a) gs.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
            return gs;
        };
        sc.robot_goals = goals(j.at("robot_goals"));
        sc.human_goals = goals(j.at("human_goals"));
        out.push_back(std::move(sc));
    }
    return out;
}

}  // namespace safectrl
