#include "safectrl/io.hpp"

#include <cstdio>
#include <fstream>

namespace safectrl {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    auto out = open_or_throw(path);
    out << "scenario,algorithm,dmin,k,param,efficiency,safety,collided,intervention_rate\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.algorithm << ',' << fmt_double(r.d_min) << ','
            << fmt_double(r.k) << ',' << fmt_double(r.param) << ',' << fmt_double(r.efficiency)
            << ',' << fmt_double(r.safety) << ',' << bool_str(r.collided) << ','
            << fmt_double(r.intervention_rate) << '\n';
    }
}

void write_sweep_points_csv(const std::string& path, const std::string& algorithm,
                            const std::vector<SweepPoint>& points) {
    auto out = open_or_throw(path);
    out << "algorithm,dmin,k,param,safety,efficiency,collided\n";
    for (const auto& p : points) {
        out << algorithm << ',' << fmt_double(p.d_min) << ',' << fmt_double(p.k) << ','
            << fmt_double(p.param) << ',' << fmt_double(p.mean_safety) << ','
            << fmt_double(p.mean_efficiency) << ',' << bool_str(p.any_collision) << '\n';
    }
}

void write_frontier_csv(const std::string& path, const std::string& algorithm,
                        const std::vector<SweepPoint>& points, const std::vector<int>& frontier) {
    auto out = open_or_throw(path);
    out << "algorithm,safety,efficiency,dmin,k,param\n";
    for (int idx : frontier) {
        const auto& p = points[idx];
        out << algorithm << ',' << fmt_double(p.mean_safety) << ','
            << fmt_double(p.mean_efficiency) << ',' << fmt_double(p.d_min) << ','
            << fmt_double(p.k) << ',' << fmt_double(p.param) << '\n';
    }
}

void write_phase_csv(const std::string& path, const std::vector<PhasePoint>& grid) {
    auto out = open_or_throw(path);
    out << "x,y,phi,u0x,u0y,ux,uy\n";
    for (const auto& p : grid) {
        out << fmt_double(p.x) << ',' << fmt_double(p.y) << ',' << fmt_double(p.phi) << ','
            << fmt_double(p.u0.x()) << ',' << fmt_double(p.u0.y()) << ','
            << fmt_double(p.u.x()) << ',' << fmt_double(p.u.y()) << '\n';
    }
}

void write_episode_jsonl(const std::string& path, const EpisodeLog& log) {
    auto out = open_or_throw(path);
    auto vec_json = [](const Vec& v) {
        std::string s = "[";
        for (int i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += fmt_double(v(i));
        }
        return s + "]";
    };
    for (const auto& f : log.frames) {
        Vec human(4);
        human << f.human_state(0), f.human_state(1), f.human_state(2), f.human_state(3);
        out << "{\"t\":" << fmt_double(f.t) << ",\"robot\":" << vec_json(f.robot_state)
            << ",\"human\":" << vec_json(human) << ",\"u0\":" << vec_json(f.u0)
            << ",\"u\":" << vec_json(f.u) << ",\"phi\":" << fmt_double(f.phi)
            << ",\"d\":" << fmt_double(f.d) << ",\"d_dot\":" << fmt_double(f.d_dot)
            << ",\"intervened\":" << bool_str(f.intervened)
            << ",\"degenerate\":" << bool_str(f.degenerate) << "}\n";
    }
}

}  // namespace safectrl
