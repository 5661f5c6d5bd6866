#pragma once

#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evaluation.hpp"
#include "planner.hpp"
#include "world.hpp"

namespace fuzzyplan {

/// Malformed scenario or result document. The message names the offending
/// field as a JSON pointer, or the line and column for syntax errors.
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace document {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string child(const std::string& pointer, std::string_view key) {
    return pointer + "/" + std::string(key);
}

inline std::string child(const std::string& pointer, std::size_t index) {
    return pointer + "/" + std::to_string(index);
}

inline const Json& require_object(const Json& j, const std::string& pointer,
                                  std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
        throw DocumentError(pointer + ": expected an object");
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const auto key : allowed) {
            known = known || item.key() == key;
        }
        if (!known) {
            throw DocumentError(child(pointer, item.key()) + ": unknown field");
        }
    }
    return j;
}

inline const Json& member(const Json& j, const std::string& pointer, std::string_view key) {
    const auto it = j.find(std::string(key));
    if (it == j.end()) {
        throw DocumentError(child(pointer, key) + ": missing field");
    }
    return *it;
}

inline double number(const Json& j, const std::string& pointer, std::string_view key) {
    const auto& v = member(j, pointer, key);
    if (!v.is_number()) {
        throw DocumentError(child(pointer, key) + ": expected a number");
    }
    return v.get<double>();
}

inline std::string text(const Json& j, const std::string& pointer, std::string_view key) {
    const auto& v = member(j, pointer, key);
    if (!v.is_string()) {
        throw DocumentError(child(pointer, key) + ": expected a string");
    }
    return v.get<std::string>();
}

inline Configuration configuration(const Json& j, const std::string& pointer) {
    require_object(j, pointer, {"x", "y"});
    return {number(j, pointer, "x"), number(j, pointer, "y")};
}

inline Shape shape(const Json& j, const std::string& pointer) {
    if (!j.is_object()) {
        throw DocumentError(pointer + ": expected an object");
    }
    const auto kind = text(j, pointer, "kind");
    if (kind == "rect") {
        require_object(j, pointer, {"kind", "xmin", "ymin", "xmax", "ymax"});
        return Rect{number(j, pointer, "xmin"), number(j, pointer, "ymin"), number(j, pointer, "xmax"),
                    number(j, pointer, "ymax")};
    }
    if (kind == "circle") {
        require_object(j, pointer, {"kind", "cx", "cy", "radius"});
        return Circle{number(j, pointer, "cx"), number(j, pointer, "cy"), number(j, pointer, "radius")};
    }
    throw DocumentError(child(pointer, "kind") + ": expected \"rect\" or \"circle\", got \"" + kind + "\"");
}

inline Json parse_json(std::string_view source) {
    try {
        return Json::parse(source.begin(), source.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw DocumentError(e.what());
    }
}

} // namespace detail

/// Scenario from its JSON document. Only structure is checked here;
/// semantic checks belong to validate_scenario().
inline Scenario parse_scenario(std::string_view source) {
    using namespace detail;
    const Json root = parse_json(source);
    const std::string top;
    require_object(root, top, {"bounds", "obstacles", "start", "goal", "profile"});

    Scenario s;
    const auto& b = member(root, top, "bounds");
    require_object(b, "/bounds", {"xmin", "ymin", "xmax", "ymax"});
    s.bounds = {number(b, "/bounds", "xmin"), number(b, "/bounds", "ymin"), number(b, "/bounds", "xmax"),
                number(b, "/bounds", "ymax")};

    const auto& obstacles = member(root, top, "obstacles");
    if (!obstacles.is_array()) {
        throw DocumentError("/obstacles: expected an array");
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const std::string pointer = child("/obstacles", i);
        const auto& o = obstacles[i];
        require_object(o, pointer, {"id", "shape", "degree"});
        s.obstacles.push_back({text(o, pointer, "id"), shape(member(o, pointer, "shape"), child(pointer, "shape")),
                               number(o, pointer, "degree")});
    }

    s.start = configuration(member(root, top, "start"), "/start");
    s.goal = configuration(member(root, top, "goal"), "/goal");
    if (root.contains("profile")) {
        const auto& p = root["profile"];
        require_object(p, "/profile", {"radius", "softness"});
        s.profile = {number(p, "/profile", "radius"), number(p, "/profile", "softness")};
    }
    return s;
}

/// Scenario document; numbers are written with round-trip precision so that
/// parse_scenario(render_scenario(s)) == s.
inline std::string render_scenario(const Scenario& s) {
    Json root;
    root["bounds"] = {{"xmin", s.bounds.xmin}, {"ymin", s.bounds.ymin}, {"xmax", s.bounds.xmax},
                      {"ymax", s.bounds.ymax}};
    root["obstacles"] = Json::array();
    for (const auto& o : s.obstacles) {
        Json shape;
        if (const auto* r = std::get_if<Rect>(&o.shape)) {
            shape = {{"kind", "rect"}, {"xmin", r->xmin}, {"ymin", r->ymin}, {"xmax", r->xmax}, {"ymax", r->ymax}};
        } else {
            const auto& c = std::get<Circle>(o.shape);
            shape = {{"kind", "circle"}, {"cx", c.cx}, {"cy", c.cy}, {"radius", c.radius}};
        }
        root["obstacles"].push_back({{"id", o.id}, {"shape", shape}, {"degree", o.degree}});
    }
    root["start"] = {{"x", s.start.x}, {"y", s.start.y}};
    root["goal"] = {{"x", s.goal.x}, {"y", s.goal.y}};
    root["profile"] = {{"radius", s.profile.radius}, {"softness", s.profile.softness}};
    return root.dump(2) + "\n";
}

/// Rounds to 12 significant digits, the precision of every number in a result document.
inline double round12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline Json candidate_json(const Candidate& c) {
    Json j;
    j["lambda"] = round12(c.evaluation.plausibility.value());
    j["length"] = round12(c.evaluation.length);
    j["penetrated"] = Json::array();
    for (const auto& id : c.evaluation.penetrated) {
        j["penetrated"].push_back(id);
    }
    j["waypoints"] = Json::array();
    for (const auto& q : c.path.waypoints()) {
        j["waypoints"].push_back(Json::array({round12(q.x), round12(q.y)}));
    }
    return j;
}

inline Json candidates_json(const std::vector<Candidate>& candidates) {
    Json out = Json::array();
    for (const auto& c : candidates) {
        out.push_back(candidate_json(c));
    }
    return out;
}

inline Json plan_json(const FuzzyPlan& plan) {
    Json j;
    j["mode"] = "fuzzy";
    j["resolution"] = round12(plan.resolution);
    j["rule"] = plan.rule.describe();
    j["n"] = plan.n();
    j["chosen"] = plan.chosen;
    j["candidates"] = candidates_json(plan.candidates);
    return j;
}

inline Json classical_json(const Candidate& candidate, double resolution) {
    Json j;
    j["mode"] = "classical";
    j["resolution"] = round12(resolution);
    j["rule"] = "classical";
    j["n"] = 1;
    j["chosen"] = 0;
    j["candidates"] = Json::array({candidate_json(candidate)});
    return j;
}

/// Paths of a result document as needed for drawing.
struct ResultOverlay {
    std::vector<std::vector<Configuration>> paths;
    std::optional<std::size_t> chosen;
};

inline ResultOverlay parse_result(std::string_view source) {
    using namespace detail;
    const Json root = parse_json(source);
    if (!root.is_object()) {
        throw DocumentError(": expected an object");
    }
    const auto& candidates = member(root, "", "candidates");
    if (!candidates.is_array()) {
        throw DocumentError("/candidates: expected an array");
    }
    ResultOverlay overlay;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const std::string pointer = child("/candidates", i);
        const auto& waypoints = member(candidates[i], pointer, "waypoints");
        if (!waypoints.is_array()) {
            throw DocumentError(child(pointer, "waypoints") + ": expected an array");
        }
        std::vector<Configuration> path;
        for (std::size_t k = 0; k < waypoints.size(); ++k) {
            const auto& w = waypoints[k];
            if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
                throw DocumentError(child(child(pointer, "waypoints"), k) + ": expected [x, y]");
            }
            path.push_back({w[0].get<double>(), w[1].get<double>()});
        }
        overlay.paths.push_back(std::move(path));
    }
    if (root.contains("chosen")) {
        const auto& c = root["chosen"];
        if (!c.is_number_unsigned() || c.get<std::size_t>() >= overlay.paths.size()) {
            throw DocumentError("/chosen: expected an index into /candidates");
        }
        overlay.chosen = c.get<std::size_t>();
    }
    return overlay;
}

} // namespace document
} // namespace fuzzyplan
