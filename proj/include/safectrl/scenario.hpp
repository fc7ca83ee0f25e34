#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "safectrl/dynamics.hpp"

namespace safectrl {

struct Workspace {
    double xmin = -5.0, ymin = -5.0, xmax = 5.0, ymax = 5.0;
};

// One test scenario: a seed plus ordered goal lists for both agents.
// Goals are drawn uniformly over the workspace interior (10% margin);
// 32 goals per agent so a 30 s episode never exhausts them.
struct Scenario {
    std::uint64_t seed = 0;
    std::vector<Eigen::Vector2d> robot_goals;
    std::vector<Eigen::Vector2d> human_goals;
    double duration = 30.0;
    double fps = 20.0;
    Workspace workspace;

    int frame_count() const { return static_cast<int>(std::lround(duration * fps)); }
};

// Deterministic: scenario i is seeded by splitmix of (master_seed, i), so the
// same master seed always produces the same list and a longer list extends a
// shorter one. Throws RejectedInputError for n < 1 or a degenerate workspace.
std::vector<Scenario> generate_scenarios(std::uint64_t master_seed, int n,
                                         const Workspace& workspace = {});

void write_scenarios_json(const std::string& path, const std::vector<Scenario>& scenarios);
std::vector<Scenario> read_scenarios_json(const std::string& path);

}  // namespace safectrl
