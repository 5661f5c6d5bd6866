#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "world.hpp"

namespace fuzzyplan {

/// Polyline realization of a continuous path. At least two waypoints, no
/// two consecutive waypoints equal. Loops are allowed.
class Path {
public:
    explicit Path(std::vector<Configuration> waypoints) : waypoints_(std::move(waypoints)) {
        if (waypoints_.size() < 2) {
            throw std::invalid_argument("a path needs at least two waypoints");
        }
        for (std::size_t i = 1; i < waypoints_.size(); ++i) {
            if (waypoints_[i] == waypoints_[i - 1]) {
                throw std::invalid_argument("consecutive waypoints " + std::to_string(i - 1) + " and " +
                                            std::to_string(i) + " coincide");
            }
        }
    }

    const std::vector<Configuration>& waypoints() const { return waypoints_; }
    std::size_t size() const { return waypoints_.size(); }
    const Configuration& front() const { return waypoints_.front(); }
    const Configuration& back() const { return waypoints_.back(); }

    Path reversed() const { return Path(std::vector<Configuration>(waypoints_.rbegin(), waypoints_.rend())); }

    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path& a, const Path& b) { return a.waypoints_ <=> b.waypoints_; }

private:
    std::vector<Configuration> waypoints_;
};

/// The fibration map: a path goes to its (start, end) pair.
inline std::pair<Configuration, Configuration> endpoints(const Path& p) { return {p.front(), p.back()}; }

struct PathEvaluation {
    double length = 0.0;
    TraversalDegree plausibility = TraversalDegree::free();
    std::set<std::string> penetrated;

    friend bool operator==(const PathEvaluation&, const PathEvaluation&) = default;
};

/// Indices (into s.obstacles, ascending) of obstacles whose footprint-inflated
/// shape overlaps the open segment (a,b).
inline std::vector<std::size_t> crossed_obstacles(const Configuration& a, const Configuration& b,
                                                  const Scenario& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        if (geometry::swept_segment_overlaps(a, b, s.profile.radius, s.obstacles[i].shape)) {
            out.push_back(i);
        }
    }
    return out;
}

inline std::set<std::string> segment_crossings(const Configuration& a, const Configuration& b,
                                               const Scenario& s) {
    if (a == b) {
        throw std::invalid_argument("segment endpoints coincide");
    }
    if (!s.bounds.contains(a) || !s.bounds.contains(b)) {
        throw OutOfBounds("segment endpoint outside workspace bounds");
    }
    std::set<std::string> ids;
    for (const auto i : crossed_obstacles(a, b, s)) {
        ids.insert(s.obstacles[i].id);
    }
    return ids;
}

/// Length is the Euclidean polyline length; plausibility is the minimum
/// effective degree over the set of penetrated obstacles (1 if none).
inline PathEvaluation evaluate_path(const Path& p, const Scenario& s) {
    const auto& w = p.waypoints();
    for (const auto& q : w) {
        if (!s.bounds.contains(q)) {
            throw OutOfBounds("path waypoint outside workspace bounds");
        }
    }
    std::vector<bool> hit(s.obstacles.size(), false);
    PathEvaluation ev;
    for (std::size_t k = 1; k < w.size(); ++k) {
        ev.length += distance(w[k - 1], w[k]);
        for (const auto i : crossed_obstacles(w[k - 1], w[k], s)) {
            hit[i] = true;
        }
    }
    for (std::size_t i = 0; i < hit.size(); ++i) {
        if (!hit[i]) {
            continue;
        }
        ev.penetrated.insert(s.obstacles[i].id);
        ev.plausibility = std::min(ev.plausibility, effective_degree(s.obstacles[i], s.profile));
    }
    return ev;
}

} // namespace fuzzyplan
