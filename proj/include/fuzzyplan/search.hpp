#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "evaluation.hpp"
#include "world.hpp"

namespace fuzzyplan {

/// Relative tolerance used whenever two path lengths are compared for equality.
inline constexpr double kLengthTolerance = 1e-9;

inline bool lengths_equal(double a, double b) {
    return std::abs(a - b) <= kLengthTolerance * std::max(std::abs(a), std::abs(b));
}

inline bool length_less(double a, double b) { return a < b && !lengths_equal(a, b); }

using NodeId = std::uint32_t;

/// Connection between an exact configuration and its nearest lattice node.
/// Zero length when the configuration lies on the lattice.
struct Link {
    double length = 0.0;
    std::vector<std::uint32_t> crossed;
    TraversalDegree plausibility = TraversalDegree::free();
};

struct GridEdge {
    NodeId a = 0;
    NodeId b = 0;
    double length = 0.0;
    std::vector<std::uint32_t> crossed; ///< obstacle indices, ascending
    TraversalDegree plausibility = TraversalDegree::free();

    /// Touches an obstacle of effective degree 0. Kept in the graph; search skips it.
    bool blocked() const { return plausibility.value() == 0.0; }
};

struct Adjacent {
    NodeId node;
    std::uint32_t edge;
};

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Lattice coordinates are snapped to 12 significant digits, the precision
/// results are written with, so serialized waypoints re-evaluate identically.
inline double snap_coordinate(double v, double scale) {
    if (std::abs(v) <= 1e-12 * scale) {
        return 0.0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline TraversalDegree min_degree(const std::vector<std::uint32_t>& crossed, const Scenario& s) {
    auto out = TraversalDegree::free();
    for (const auto i : crossed) {
        out = std::min(out, effective_degree(s.obstacles[i], s.profile));
    }
    return out;
}

template <class Seq>
std::vector<std::uint32_t> to_u32(const Seq& seq) {
    return std::vector<std::uint32_t>(seq.begin(), seq.end());
}

} // namespace detail

/// 8-connected lattice over the workspace bounds, anchored at (xmin, ymin).
/// Node ids are ordered lexicographically by (x, y).
class GridGraph {
public:
    GridGraph(const Scenario& s, double resolution) : scenario_(s), resolution_(resolution) {
        require_valid(s);
        const double w = s.bounds.width();
        const double h = s.bounds.height();
        if (!(resolution > 0.0) || !std::isfinite(resolution)) {
            throw GridError("resolution must be > 0");
        }
        if (resolution > std::min(w, h)) {
            throw GridError("resolution exceeds the smaller workspace side");
        }
        columns_ = static_cast<std::size_t>(std::floor(w / resolution + 1e-9)) + 1;
        rows_ = static_cast<std::size_t>(std::floor(h / resolution + 1e-9)) + 1;
        const double scale = std::max({1.0, std::abs(s.bounds.xmin), std::abs(s.bounds.xmax),
                                       std::abs(s.bounds.ymin), std::abs(s.bounds.ymax)});

        nodes_.reserve(columns_ * rows_);
        for (std::size_t i = 0; i < columns_; ++i) {
            for (std::size_t j = 0; j < rows_; ++j) {
                const double x = detail::snap_coordinate(s.bounds.xmin + static_cast<double>(i) * resolution, scale);
                const double y = detail::snap_coordinate(s.bounds.ymin + static_cast<double>(j) * resolution, scale);
                nodes_.push_back({std::clamp(x, s.bounds.xmin, s.bounds.xmax), std::clamp(y, s.bounds.ymin, s.bounds.ymax)});
            }
        }
        free_.reserve(nodes_.size());
        for (const auto& q : nodes_) {
            free_.push_back(is_free(q, s));
        }

        // Edges to the four "forward" neighbours; each undirected edge once.
        const double diagonal = resolution * std::sqrt(2.0);
        for (std::size_t i = 0; i < columns_; ++i) {
            for (std::size_t j = 0; j < rows_; ++j) {
                const NodeId from = node_at(i, j);
                const std::tuple<int, int, double> steps[4] = {
                    {0, 1, resolution}, {1, -1, diagonal}, {1, 0, resolution}, {1, 1, diagonal}};
                for (const auto& [di, dj, len] : steps) {
                    const auto ni = static_cast<std::ptrdiff_t>(i) + di;
                    const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(columns_) ||
                        nj >= static_cast<std::ptrdiff_t>(rows_)) {
                        continue;
                    }
                    add_edge(from, node_at(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj)), len);
                }
            }
        }
        build_adjacency();

        start_node_ = nearest_node(s.start);
        goal_node_ = nearest_node(s.goal);
        if (start_node_ == goal_node_) {
            throw GridError("resolution too coarse: start and goal map to the same lattice node");
        }
        start_link_ = make_link(s.start, nodes_[start_node_]);
        goal_link_ = make_link(nodes_[goal_node_], s.goal);
    }

    const Scenario& scenario() const { return scenario_; }
    double resolution() const { return resolution_; }
    std::size_t columns() const { return columns_; }
    std::size_t rows() const { return rows_; }
    std::size_t node_count() const { return nodes_.size(); }

    NodeId node_at(std::size_t column, std::size_t row) const {
        return static_cast<NodeId>(column * rows_ + row);
    }
    const Configuration& node(NodeId id) const { return nodes_[id]; }
    const std::vector<Configuration>& nodes() const { return nodes_; }
    bool node_free(NodeId id) const { return free_[id]; }

    const std::vector<GridEdge>& edges() const { return edges_; }

    /// Neighbours of `id`, ascending by node id.
    std::span<const Adjacent> neighbors(NodeId id) const {
        return {adjacency_.data() + offsets_[id], adjacency_.data() + offsets_[id + 1]};
    }

    NodeId start_node() const { return start_node_; }
    NodeId goal_node() const { return goal_node_; }
    const Link& start_link() const { return start_link_; }
    const Link& goal_link() const { return goal_link_; }

    NodeId nearest_node(const Configuration& q) const {
        const auto index = [&](double v, double lo, std::size_t count) {
            const auto k = std::lround((v - lo) / resolution_);
            return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(count) - 1));
        };
        return node_at(index(q.x, scenario_.bounds.xmin, columns_), index(q.y, scenario_.bounds.ymin, rows_));
    }

    /// Full polyline for a lattice route from start_node to goal_node,
    /// including the exact start and goal when they are off-lattice.
    Path realize(std::span<const NodeId> route) const {
        std::vector<Configuration> w;
        w.reserve(route.size() + 2);
        if (scenario_.start != nodes_[route.front()]) {
            w.push_back(scenario_.start);
        }
        for (const auto id : route) {
            w.push_back(nodes_[id]);
        }
        if (scenario_.goal != nodes_[route.back()]) {
            w.push_back(scenario_.goal);
        }
        return Path(std::move(w));
    }

private:
    void add_edge(NodeId a, NodeId b, double length) {
        GridEdge e{a, b, length, detail::to_u32(crossed_obstacles(nodes_[a], nodes_[b], scenario_)), {}};
        e.plausibility = detail::min_degree(e.crossed, scenario_);
        edges_.push_back(std::move(e));
    }

    void build_adjacency() {
        std::vector<std::vector<Adjacent>> lists(nodes_.size());
        for (std::uint32_t k = 0; k < edges_.size(); ++k) {
            lists[edges_[k].a].push_back({edges_[k].b, k});
            lists[edges_[k].b].push_back({edges_[k].a, k});
        }
        offsets_.assign(nodes_.size() + 1, 0);
        for (std::size_t v = 0; v < lists.size(); ++v) {
            std::sort(lists[v].begin(), lists[v].end(),
                      [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });
            offsets_[v + 1] = offsets_[v] + lists[v].size();
            adjacency_.insert(adjacency_.end(), lists[v].begin(), lists[v].end());
        }
    }

    Link make_link(const Configuration& a, const Configuration& b) const {
        Link link;
        if (a == b) {
            return link;
        }
        link.length = distance(a, b);
        link.crossed = detail::to_u32(crossed_obstacles(a, b, scenario_));
        link.plausibility = detail::min_degree(link.crossed, scenario_);
        return link;
    }

    Scenario scenario_;
    double resolution_;
    std::size_t columns_ = 0;
    std::size_t rows_ = 0;
    std::vector<Configuration> nodes_;
    std::vector<bool> free_;
    std::vector<GridEdge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Adjacent> adjacency_;
    NodeId start_node_ = 0;
    NodeId goal_node_ = 0;
    Link start_link_;
    Link goal_link_;
};

inline GridGraph build_grid(const Scenario& s, double resolution) { return GridGraph(s, resolution); }

/// A path together with its evaluation. Search results and plan candidates use this.
struct Candidate {
    Path path;
    PathEvaluation evaluation;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

namespace detail {

struct Route {
    std::vector<NodeId> nodes;
    double length = 0.0;
};

/// Lexicographically smallest (by node id, hence by coordinates) among the
/// minimum-length start_node -> goal_node routes using only edges accepted by
/// `allow`. Lengths include both links; links are not filtered here.
inline std::optional<Route> lexicographic_shortest(const GridGraph& g,
                                                   const std::function<bool(const GridEdge&)>& allow) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> to_goal(g.node_count(), inf);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    to_goal[g.goal_node()] = g.goal_link().length;
    open.push({to_goal[g.goal_node()], g.goal_node()});
    while (!open.empty()) {
        const auto [d, v] = open.top();
        open.pop();
        if (d > to_goal[v]) {
            continue;
        }
        for (const auto& adj : g.neighbors(v)) {
            const auto& e = g.edges()[adj.edge];
            if (!allow(e)) {
                continue;
            }
            const double nd = d + e.length;
            if (nd < to_goal[adj.node]) {
                to_goal[adj.node] = nd;
                open.push({nd, adj.node});
            }
        }
    }
    if (to_goal[g.start_node()] == inf) {
        return std::nullopt;
    }

    const double total = g.start_link().length + to_goal[g.start_node()];
    Route route;
    route.nodes.push_back(g.start_node());
    std::vector<bool> visited(g.node_count(), false);
    visited[g.start_node()] = true;
    double so_far = g.start_link().length;
    while (route.nodes.back() != g.goal_node()) {
        const NodeId v = route.nodes.back();
        bool advanced = false;
        for (const auto& adj : g.neighbors(v)) {
            const auto& e = g.edges()[adj.edge];
            if (visited[adj.node] || !allow(e) || to_goal[adj.node] == inf) {
                continue;
            }
            if (!length_less(total, so_far + e.length + to_goal[adj.node])) {
                so_far += e.length;
                visited[adj.node] = true;
                route.nodes.push_back(adj.node);
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            throw std::logic_error("shortest-route reconstruction stalled");
        }
    }
    route.length = so_far + g.goal_link().length;
    return route;
}

} // namespace detail

/// Shortest route through free space only: every edge and both links must
/// cross nothing. Ties go to the lexicographically smallest node sequence.
inline std::optional<Path> classical_shortest(const GridGraph& g) {
    if (!g.start_link().crossed.empty() || !g.goal_link().crossed.empty() || !g.node_free(g.start_node()) ||
        !g.node_free(g.goal_node()) || !is_free(g.scenario().start, g.scenario()) ||
        !is_free(g.scenario().goal, g.scenario())) {
        return std::nullopt;
    }
    auto route = detail::lexicographic_shortest(g, [&](const GridEdge& e) {
        return e.crossed.empty() && g.node_free(e.a) && g.node_free(e.b);
    });
    if (!route) {
        return std::nullopt;
    }
    return g.realize(route->nodes);
}

/// Partial path state of the bi-objective search.
struct ParetoLabel {
    double length = 0.0;
    TraversalDegree plausibility = TraversalDegree::free();
    std::optional<std::size_t> predecessor;
    NodeId node = 0;
};

struct LabelSearchResult {
    std::vector<ParetoLabel> labels;      ///< every permanent label, indexed by predecessor links
    std::vector<std::size_t> goal_labels; ///< permanent labels at goal_node
};

/// (l1, p1) dominates (l2, p2): no longer, at least as plausible, one strictly.
inline bool dominates(double l1, TraversalDegree p1, double l2, TraversalDegree p2) {
    const bool no_worse = !length_less(l2, l1) && p1 >= p2;
    return no_worse && (length_less(l1, l2) || p1 > p2);
}

/// Multi-label setting search over (length, bottleneck plausibility) with a
/// Pareto set of permanent labels per node. Labels whose plausibility drops
/// to 0 are pruned. The start link seeds the first label.
inline LabelSearchResult pareto_label_search(const GridGraph& g) {
    LabelSearchResult out;
    if (g.start_link().plausibility.value() == 0.0) {
        return out;
    }

    struct Tentative {
        double length;
        TraversalDegree plausibility;
        NodeId node;
        std::size_t sequence;
        std::optional<std::size_t> predecessor;
    };
    const auto later = [](const Tentative& x, const Tentative& y) {
        return std::tie(x.length, y.plausibility, x.node, x.sequence) >
               std::tie(y.length, x.plausibility, y.node, y.sequence);
    };
    std::priority_queue<Tentative, std::vector<Tentative>, decltype(later)> open(later);
    std::vector<std::vector<std::size_t>> permanent(g.node_count());
    std::size_t sequence = 0;

    const auto weakly_dominated = [&](NodeId v, double length, TraversalDegree plausibility) {
        return std::any_of(permanent[v].begin(), permanent[v].end(), [&](std::size_t k) {
            const auto& l = out.labels[k];
            return !length_less(length, l.length) && l.plausibility >= plausibility;
        });
    };

    open.push({g.start_link().length, g.start_link().plausibility, g.start_node(), sequence++, std::nullopt});
    while (!open.empty()) {
        const Tentative t = open.top();
        open.pop();
        if (weakly_dominated(t.node, t.length, t.plausibility)) {
            continue;
        }
        const std::size_t id = out.labels.size();
        out.labels.push_back({t.length, t.plausibility, t.predecessor, t.node});
        permanent[t.node].push_back(id);
        if (t.node == g.goal_node()) {
            out.goal_labels.push_back(id);
            continue;
        }
        for (const auto& adj : g.neighbors(t.node)) {
            const auto& e = g.edges()[adj.edge];
            if (e.blocked()) {
                continue;
            }
            const double length = t.length + e.length;
            const auto plausibility = std::min(t.plausibility, e.plausibility);
            if (weakly_dominated(adj.node, length, plausibility)) {
                continue;
            }
            open.push({length, plausibility, adj.node, sequence++, id});
        }
    }
    return out;
}

namespace detail {

struct FrontPoint {
    double length;
    TraversalDegree plausibility;
};

/// Non-dominated subset, one point per plausibility level, sorted by decreasing plausibility.
inline std::vector<FrontPoint> pareto_filter(std::vector<FrontPoint> points) {
    std::sort(points.begin(), points.end(), [](const FrontPoint& x, const FrontPoint& y) {
        return std::tie(y.plausibility, x.length) < std::tie(x.plausibility, y.length);
    });
    std::vector<FrontPoint> front;
    for (const auto& p : points) {
        // Sorted by decreasing plausibility, so a point survives only if it
        // is strictly shorter than everything kept so far.
        if (front.empty() || length_less(p.length, front.back().length)) {
            front.push_back(p);
        }
    }
    return front;
}

inline std::size_t distinct_positive_degrees(const Scenario& s) {
    std::vector<double> values;
    for (const auto& o : s.obstacles) {
        const double v = effective_degree(o, s.profile).value();
        if (v > 0.0) {
            values.push_back(v);
        }
    }
    std::sort(values.begin(), values.end());
    return static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
}

} // namespace detail

/// Upper bound on the size of any Pareto front for this scenario: one point
/// per distinct effective degree, plus the unobstructed level.
inline std::size_t front_size_bound(const Scenario& s) {
    return detail::distinct_positive_degrees(s) + 1;
}

/// Full Pareto front of start -> goal routes under (shorter, more plausible),
/// sorted by decreasing plausibility. Each point is represented by its
/// lexicographically smallest minimum-length route. Empty when every route
/// has plausibility 0.
inline std::vector<Candidate> pareto_search(const GridGraph& g) {
    std::vector<Candidate> out;
    if (g.goal_link().plausibility.value() == 0.0) {
        return out;
    }
    const auto result = pareto_label_search(g);
    std::vector<detail::FrontPoint> points;
    for (const auto k : result.goal_labels) {
        const auto& l = result.labels[k];
        const auto plausibility = std::min(l.plausibility, g.goal_link().plausibility);
        if (plausibility.value() > 0.0) {
            points.push_back({l.length + g.goal_link().length, plausibility});
        }
    }
    const auto front = detail::pareto_filter(std::move(points));
    if (front.size() > front_size_bound(g.scenario())) {
        throw std::logic_error("Pareto front larger than the number of plausibility levels");
    }

    for (const auto& point : front) {
        const auto route = detail::lexicographic_shortest(
            g, [&](const GridEdge& e) { return e.plausibility >= point.plausibility; });
        if (!route || !lengths_equal(route->length, point.length)) {
            throw std::logic_error("representative route does not reproduce its Pareto point");
        }
        Path path = g.realize(route->nodes);
        PathEvaluation ev = evaluate_path(path, g.scenario());
        if (ev.plausibility != point.plausibility) {
            throw std::logic_error("representative route plausibility differs from its Pareto point");
        }
        out.push_back({std::move(path), std::move(ev)});
    }
    return out;
}

class BudgetExceeded : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive reference: enumerates every simple start_node -> goal_node
/// route, evaluates each with evaluate_path(), and keeps the exact Pareto
/// front by pairwise dominance. Meant for grids of a dozen or so nodes.
inline std::vector<Candidate> enumerate_paths_oracle(const GridGraph& g, std::size_t node_budget) {
    if (g.node_count() > node_budget) {
        throw BudgetExceeded("grid has " + std::to_string(g.node_count()) + " nodes, budget is " +
                             std::to_string(node_budget));
    }
    const Scenario& s = g.scenario();
    std::vector<Candidate> archive;
    std::vector<NodeId> route{g.start_node()};
    std::vector<bool> on_route(g.node_count(), false);
    on_route[g.start_node()] = true;

    const auto consider = [&]() {
        Path path = g.realize(route);
        PathEvaluation ev = evaluate_path(path, s);
        if (ev.plausibility.value() == 0.0) {
            return;
        }
        for (const auto& kept : archive) {
            // Routes arrive in lexicographic order, so an equal point already
            // kept has the smaller node sequence.
            const bool same_point = lengths_equal(kept.evaluation.length, ev.length) &&
                                    kept.evaluation.plausibility == ev.plausibility;
            if (same_point || dominates(kept.evaluation.length, kept.evaluation.plausibility, ev.length,
                                        ev.plausibility)) {
                return;
            }
        }
        std::erase_if(archive, [&](const Candidate& kept) {
            return dominates(ev.length, ev.plausibility, kept.evaluation.length, kept.evaluation.plausibility);
        });
        archive.push_back({std::move(path), std::move(ev)});
    };

    const std::function<void(NodeId)> extend = [&](NodeId v) {
        if (v == g.goal_node()) {
            consider();
            return;
        }
        for (const auto& adj : g.neighbors(v)) {
            if (on_route[adj.node]) {
                continue;
            }
            on_route[adj.node] = true;
            route.push_back(adj.node);
            extend(adj.node);
            route.pop_back();
            on_route[adj.node] = false;
        }
    };
    extend(g.start_node());

    std::sort(archive.begin(), archive.end(), [](const Candidate& x, const Candidate& y) {
        return x.evaluation.plausibility > y.evaluation.plausibility;
    });
    return archive;
}

} // namespace fuzzyplan
