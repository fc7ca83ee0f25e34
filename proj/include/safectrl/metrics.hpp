#pragma once

#include <optional>

#include "safectrl/episode.hpp"

namespace safectrl {

// Goals reached by the robot; in interactive mode both agents count.
double efficiency_score(const EpisodeLog& log);

// -sum over frames of min(0, log(d / d_s)) * d_dot. Zero whenever d >= d_s;
// approaching inside the threshold lowers it, retreating raises it. Summed
// per frame without a dt factor, so scores compare only at equal fps.
double safety_score(const EpisodeLog& log, double d_s = 2.0);

double intervention_rate(const EpisodeLog& log);
double min_distance(const EpisodeLog& log);

struct MetricsReport {
    double efficiency = 0.0;
    double safety = 0.0;
    double intervention_rate = 0.0;
    bool collided = false;
    bool valid = true;
};

MetricsReport evaluate_episode(const EpisodeLog& log, double d_s = 2.0);

struct HybridInput {
    double mean_efficiency = 0.0;
    bool any_collision = false;
};

// Maximum mean efficiency over parameter points whose batch had no collision;
// empty when every point collided.
std::optional<double> hybrid_score(const std::vector<HybridInput>& sweep_results);

}  // namespace safectrl
