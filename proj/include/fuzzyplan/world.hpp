#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fuzzyplan {

/// A number in [0,1] describing how easy it is to go over an obstacle.
/// 1 means the obstacle does not hinder motion at all, 0 means it must be avoided.
class TraversalDegree {
public:
    constexpr TraversalDegree() = default;

    explicit TraversalDegree(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw std::out_of_range("traversal degree " + std::to_string(value) + " outside [0,1]");
        }
    }

    static constexpr TraversalDegree impassable() { return TraversalDegree(0.0, Unchecked{}); }
    static constexpr TraversalDegree free() { return TraversalDegree(1.0, Unchecked{}); }

    constexpr double value() const { return value_; }

    friend constexpr auto operator<=>(TraversalDegree, TraversalDegree) = default;

private:
    struct Unchecked {};
    constexpr TraversalDegree(double value, Unchecked) : value_(value) {}

    double value_ = 1.0;
};

struct Configuration {
    double x = 0.0;
    double y = 0.0;

    friend constexpr auto operator<=>(const Configuration&, const Configuration&) = default;
};

inline double distance(const Configuration& a, const Configuration& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(const Configuration& q) const {
        return q.x >= xmin && q.x <= xmax && q.y >= ymin && q.y <= ymax;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;

    friend bool operator==(const Circle&, const Circle&) = default;
};

using Shape = std::variant<Rect, Circle>;

/// Obstacles are open sets: their boundary is free space. `degree` is kept raw
/// so that out-of-range input can be reported by validate_scenario().
struct Obstacle {
    std::string id;
    Shape shape;
    double degree = 0.0;

    TraversalDegree traversal_degree() const { return TraversalDegree(degree); }

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct RobotProfile {
    double radius = 0.0;   ///< footprint disc radius
    double softness = 0.0; ///< flexibility; raises effective traversal degrees

    friend bool operator==(const RobotProfile&, const RobotProfile&) = default;
};

struct Scenario {
    Rect bounds;
    std::vector<Obstacle> obstacles;
    Configuration start;
    Configuration goal;
    RobotProfile profile;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Degree of an obstacle as seen by a (possibly soft) robot: lambda^(1/(1+softness)).
inline TraversalDegree effective_degree(TraversalDegree degree, double softness) {
    const double lambda = degree.value();
    if (lambda == 0.0 || lambda == 1.0) {
        return degree;
    }
    return TraversalDegree(std::pow(lambda, 1.0 / (1.0 + softness)));
}

inline TraversalDegree effective_degree(const Obstacle& o, const RobotProfile& p) {
    return effective_degree(o.traversal_degree(), p.softness);
}

namespace geometry {

inline double squared(double v) { return v * v; }

inline double point_rect_distance2(const Configuration& q, const Rect& r) {
    const double dx = std::max({r.xmin - q.x, 0.0, q.x - r.xmax});
    const double dy = std::max({r.ymin - q.y, 0.0, q.y - r.ymax});
    return dx * dx + dy * dy;
}

inline double point_segment_distance2(const Configuration& q, const Configuration& a,
                                      const Configuration& b) {
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((q.x - a.x) * vx + (q.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return squared(a.x + t * vx - q.x) + squared(a.y + t * vy - q.y);
}

/// Clips segment a->b against the closed rectangle (Liang-Barsky).
/// Returns false when the segment misses it; otherwise [t0,t1] is the inside range.
inline bool clip_segment(const Configuration& a, const Configuration& b, const Rect& r,
                         double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - r.xmin, r.xmax - a.x, a.y - r.ymin, r.ymax - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) {
                return false;
            }
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) {
            return false;
        }
    }
    return true;
}

inline bool strictly_inside(const Configuration& q, const Rect& r) {
    return q.x > r.xmin && q.x < r.xmax && q.y > r.ymin && q.y < r.ymax;
}

/// True iff the open segment (a,b) meets the open interior of `r`.
/// A chord of a convex polygon either lies in one side or has its relative
/// interior inside, so testing the midpoint of the clipped piece is exact.
inline bool segment_enters_open_rect(const Configuration& a, const Configuration& b,
                                     const Rect& r) {
    double t0 = 0.0;
    double t1 = 1.0;
    if (!clip_segment(a, b, r, t0, t1) || !(t0 < t1)) {
        return false;
    }
    const double tm = 0.5 * (t0 + t1);
    return strictly_inside({a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y)}, r);
}

inline double segment_rect_distance2(const Configuration& a, const Configuration& b,
                                     const Rect& r) {
    double t0 = 0.0;
    double t1 = 1.0;
    if (clip_segment(a, b, r, t0, t1)) {
        return 0.0;
    }
    double best = std::min(point_rect_distance2(a, r), point_rect_distance2(b, r));
    const Configuration corners[4] = {
        {r.xmin, r.ymin}, {r.xmax, r.ymin}, {r.xmax, r.ymax}, {r.xmin, r.ymax}};
    for (const auto& c : corners) {
        best = std::min(best, point_segment_distance2(c, a, b));
    }
    return best;
}

/// Footprint disc of `radius` at q overlaps the open shape.
inline bool disc_overlaps(const Configuration& q, double radius, const Shape& shape) {
    if (const auto* r = std::get_if<Rect>(&shape)) {
        if (radius == 0.0) {
            return strictly_inside(q, *r);
        }
        return point_rect_distance2(q, *r) < squared(radius);
    }
    const auto& c = std::get<Circle>(shape);
    return squared(q.x - c.cx) + squared(q.y - c.cy) < squared(c.radius + radius);
}

/// The open segment (a,b) swept by the footprint overlaps the open shape.
/// Grazing contact (distance exactly equal to the inflation) is not an overlap.
inline bool swept_segment_overlaps(const Configuration& a, const Configuration& b, double radius,
                                   const Shape& shape) {
    if (const auto* r = std::get_if<Rect>(&shape)) {
        if (radius == 0.0) {
            return segment_enters_open_rect(a, b, *r);
        }
        return segment_rect_distance2(a, b, *r) < squared(radius);
    }
    const auto& c = std::get<Circle>(shape);
    return point_segment_distance2({c.cx, c.cy}, a, b) < squared(c.radius + radius);
}

} // namespace geometry

class OutOfBounds : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Classical free-space membership: the footprint meets no obstacle, whatever its degree.
inline bool is_free(const Configuration& q, const Scenario& s) {
    if (!s.bounds.contains(q)) {
        throw OutOfBounds("configuration outside workspace bounds");
    }
    return std::none_of(s.obstacles.begin(), s.obstacles.end(), [&](const Obstacle& o) {
        return geometry::disc_overlaps(q, s.profile.radius, o.shape);
    });
}

struct Violation {
    std::string field;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;

    bool ok() const { return violations.empty(); }

    std::string summary() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) {
                out += "; ";
            }
            out += v.field + ": " + v.message;
        }
        return out;
    }
};

namespace detail {

inline bool finite(double v) { return std::isfinite(v); }

inline void check_endpoint(const Configuration& q, const std::string& name, const Scenario& s,
                           ValidationReport& report) {
    if (!finite(q.x) || !finite(q.y) || !s.bounds.contains(q)) {
        report.violations.push_back({name, "outside workspace bounds"});
        return;
    }
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        const auto& o = s.obstacles[i];
        if (!(o.degree >= 0.0 && o.degree <= 1.0)) {
            continue;
        }
        if (!geometry::disc_overlaps(q, s.profile.radius, o.shape)) {
            continue;
        }
        if (effective_degree(o, s.profile).value() == 0.0) {
            report.violations.push_back({name, "inside impenetrable obstacle '" + o.id + "'"});
        } else {
            report.warnings.push_back({name, "inside penetrable obstacle '" + o.id + "'"});
        }
    }
}

} // namespace detail

inline ValidationReport validate_scenario(const Scenario& s) {
    ValidationReport report;
    const auto& b = s.bounds;
    const bool bounds_ok = detail::finite(b.xmin) && detail::finite(b.xmax) &&
                           detail::finite(b.ymin) && detail::finite(b.ymax) && b.xmin < b.xmax &&
                           b.ymin < b.ymax;
    if (!bounds_ok) {
        report.violations.push_back({"bounds", "requires xmin < xmax and ymin < ymax"});
    }
    if (!(s.profile.radius >= 0.0) || !detail::finite(s.profile.radius)) {
        report.violations.push_back({"profile.radius", "must be >= 0"});
    }
    if (!(s.profile.softness >= 0.0) || !detail::finite(s.profile.softness)) {
        report.violations.push_back({"profile.softness", "must be >= 0"});
    }

    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        const auto& o = s.obstacles[i];
        const std::string field = "obstacles[" + std::to_string(i) + "]";
        if (o.id.empty()) {
            report.violations.push_back({field + ".id", "empty id"});
        } else if (!seen.insert(o.id).second) {
            report.violations.push_back({field + ".id", "duplicate id '" + o.id + "'"});
        }
        if (!(o.degree >= 0.0 && o.degree <= 1.0)) {
            report.violations.push_back({field + ".degree", "degree out of [0,1]"});
        }
        if (const auto* r = std::get_if<Rect>(&o.shape)) {
            if (!(r->xmin < r->xmax && r->ymin < r->ymax)) {
                report.violations.push_back({field + ".shape", "rectangle requires xmin < xmax and ymin < ymax"});
            }
        } else if (!(std::get<Circle>(o.shape).radius > 0.0)) {
            report.violations.push_back({field + ".shape", "circle radius must be > 0"});
        }
    }

    if (s.start == s.goal) {
        report.violations.push_back({"goal", "start equals goal"});
    }
    if (bounds_ok && report.violations.empty()) {
        detail::check_endpoint(s.start, "start", s, report);
        detail::check_endpoint(s.goal, "goal", s, report);
    } else if (bounds_ok) {
        if (!s.bounds.contains(s.start)) {
            report.violations.push_back({"start", "outside workspace bounds"});
        }
        if (!s.bounds.contains(s.goal)) {
            report.violations.push_back({"goal", "outside workspace bounds"});
        }
    }
    return report;
}

class InvalidScenario : public std::invalid_argument {
public:
    explicit InvalidScenario(ValidationReport report)
        : std::invalid_argument("invalid scenario: " + report.summary()), report_(std::move(report)) {}

    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

inline void require_valid(const Scenario& s) {
    auto report = validate_scenario(s);
    if (!report.ok()) {
        throw InvalidScenario(std::move(report));
    }
}

} // namespace fuzzyplan
