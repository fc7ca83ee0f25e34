#pragma once

#include <string>
#include <vector>

#include "safectrl/metrics.hpp"
#include "safectrl/phase.hpp"
#include "safectrl/sweep.hpp"

namespace safectrl {

// Shortest round-trip decimal form; identical output for identical doubles.
std::string fmt_double(double v);

struct ResultRow {
    int scenario = 0;
    std::string algorithm;
    double d_min = 0.0, k = 0.0, param = 0.0;
    double efficiency = 0.0, safety = 0.0;
    bool collided = false;
    double intervention_rate = 0.0;
};

// Header: scenario,algorithm,dmin,k,param,efficiency,safety,collided,intervention_rate
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);

// Header: algorithm,dmin,k,param,safety,efficiency,collided
void write_sweep_points_csv(const std::string& path, const std::string& algorithm,
                            const std::vector<SweepPoint>& points);

// Frontier rows ordered by safety ascending (efficiency descending).
void write_frontier_csv(const std::string& path, const std::string& algorithm,
                        const std::vector<SweepPoint>& points, const std::vector<int>& frontier);

// Header: x,y,phi,u0x,u0y,ux,uy
void write_phase_csv(const std::string& path, const std::vector<PhasePoint>& grid);

// One JSON object per frame.
void write_episode_jsonl(const std::string& path, const EpisodeLog& log);

}  // namespace safectrl
