#include "safectrl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace safectrl {

std::vector<double> default_param_grid(Algorithm alg) {
    const std::vector<double> magnitudes{0.1, 0.3, 1.0, 3.0, 10.0};
    std::vector<double> grid;
    for (double m : magnitudes) {
        switch (alg) {
            case Algorithm::PFM:
            case Algorithm::SMA:
                grid.push_back(m);
                break;
            case Algorithm::SSA:
            case Algorithm::BFM:
            case Algorithm::SSS:
                grid.push_back(-m);
                break;
        }
    }
    return grid;
}

SweepResult tradeoff_sweep(const SweepSpec& spec, const std::vector<Scenario>& scenarios,
                           int threads) {
    if (spec.dmin_grid.empty() || spec.k_grid.empty())
        throw RejectedInputError("sweep grids must be non-empty");
    std::vector<double> params = spec.param_grid;
    if (params.empty()) params = default_param_grid(spec.algorithm);
    if (scenarios.empty()) throw RejectedInputError("sweep needs at least one scenario");

    struct GridPoint {
        double d_min, k, param;
    };
    std::vector<GridPoint> grid;
    for (double dmin : spec.dmin_grid)
        for (double k : spec.k_grid)
            for (double p : params) grid.push_back({dmin, k, p});

    SweepResult result;
    result.points.resize(grid.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            EpisodeConfig cfg;
            cfg.model = spec.model;
            cfg.controller.algorithm = spec.algorithm;
            cfg.controller.safety_params.d_min = grid[i].d_min;
            cfg.controller.safety_params.k = grid[i].k;
            cfg.controller = cfg.controller.with_param(grid[i].param);
            cfg.human = spec.human;
            cfg.estimation = spec.estimation;
            cfg.gains = spec.gains;

            SweepPoint pt;
            pt.d_min = grid[i].d_min;
            pt.k = grid[i].k;
            pt.param = grid[i].param;
            double sum_safety = 0.0, sum_eff = 0.0, sum_intervention = 0.0;
            int valid = 0;
            for (const auto& sc : scenarios) {
                const EpisodeLog log = run_episode(cfg, sc);
                if (!log.valid) {
                    ++pt.invalid_episodes;
                    pt.any_collision = true;  // treat blowups as failures
                    continue;
                }
                const MetricsReport m = evaluate_episode(log, spec.d_s);
                sum_safety += m.safety;
                sum_eff += m.efficiency;
                sum_intervention += m.intervention_rate;
                if (m.collided) pt.any_collision = true;
                ++valid;
            }
            if (valid > 0) {
                pt.mean_safety = sum_safety / valid;
                pt.mean_efficiency = sum_eff / valid;
                pt.mean_intervention_rate = sum_intervention / valid;
            }
            result.points[i] = pt;
        }
    };

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::min(8u, std::max(
                                      1u, std::thread::hardware_concurrency())));
    if (n_threads <= 1 || grid.size() == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<std::pair<double, double>> pts;
    pts.reserve(result.points.size());
    for (const auto& p : result.points) pts.emplace_back(p.mean_safety, p.mean_efficiency);
    result.frontier = upper_right_frontier(pts);

    std::vector<HybridInput> hybrid_inputs;
    for (const auto& p : result.points)
        hybrid_inputs.push_back({p.mean_efficiency, p.any_collision});
    result.hybrid = hybrid_score(hybrid_inputs);
    return result;
}

std::vector<int> upper_right_frontier(const std::vector<std::pair<double, double>>& points) {
    // Deduplicate, drop dominated points, then prune anything strictly below
    // the chain. Collinear points stay on the frontier.
    std::vector<int> candidates;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        bool keep = true;
        for (int j = 0; j < static_cast<int>(points.size()) && keep; ++j) {
            if (i == j) continue;
            const bool geq = points[j].first >= points[i].first &&
                             points[j].second >= points[i].second;
            const bool strict = points[j].first > points[i].first ||
                                points[j].second > points[i].second;
            if (geq && strict) keep = false;
            // exact duplicate: keep only the lowest index
            if (!strict && geq && j < i) keep = false;
        }
        if (keep) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        if (points[a].first != points[b].first) return points[a].first < points[b].first;
        return points[a].second > points[b].second;
    });

    std::vector<int> hull;
    for (int idx : candidates) {
        while (hull.size() >= 2) {
            const auto& a = points[hull[hull.size() - 2]];
            const auto& b = points[hull[hull.size() - 1]];
            const auto& c = points[idx];
            const double cross = (b.first - a.first) * (c.second - a.second) -
                                 (b.second - a.second) * (c.first - a.first);
            if (cross > 0.0)  // b strictly below chord a-c
                hull.pop_back();
            else
                break;
        }
        hull.push_back(idx);
    }
    return hull;
}

}  // namespace safectrl
