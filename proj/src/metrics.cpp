#include "safectrl/metrics.hpp"

#include <cmath>
#include <limits>

namespace safectrl {

double efficiency_score(const EpisodeLog& log) {
    double goals = 0.0;
    for (const auto& e : log.goal_events) {
        if (e.robot || log.interactive) goals += 1.0;
    }
    return goals;
}

double safety_score(const EpisodeLog& log, double d_s) {
    if (!(d_s > 0.0)) throw RejectedInputError("d_s must be > 0");
    double score = 0.0;
    for (const auto& f : log.frames) {
        if (f.d <= 0.0) continue;
        score += -std::min(0.0, std::log(f.d / d_s)) * f.d_dot;
    }
    return score;
}

double intervention_rate(const EpisodeLog& log) {
    if (log.frames.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& f : log.frames)
        if (f.intervened) ++n;
    return static_cast<double>(n) / static_cast<double>(log.frames.size());
}

double min_distance(const EpisodeLog& log) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : log.frames) d = std::min(d, f.d);
    return d;
}

MetricsReport evaluate_episode(const EpisodeLog& log, double d_s) {
    MetricsReport r;
    r.efficiency = efficiency_score(log);
    r.safety = safety_score(log, d_s);
    r.intervention_rate = intervention_rate(log);
    r.collided = log.collided;
    r.valid = log.valid;
    return r;
}

std::optional<double> hybrid_score(const std::vector<HybridInput>& sweep_results) {
    std::optional<double> best;
    for (const auto& r : sweep_results) {
        if (r.any_collision) continue;
        if (!best || r.mean_efficiency > *best) best = r.mean_efficiency;
    }
    return best;
}

}  // namespace safectrl
