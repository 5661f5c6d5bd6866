#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evaluation.hpp"
#include "search.hpp"
#include "world.hpp"

namespace fuzzyplan {

/// How one path is picked out of a set of (length, plausibility) trade-offs.
class SelectionRule {
public:
    enum class Mode { lex_plausibility, threshold, weighted };

    /// Most plausible candidate; shortest among equally plausible ones.
    static SelectionRule lex_plausibility() { return SelectionRule(Mode::lex_plausibility, 0.0); }

    /// Shortest candidate with plausibility >= minimum; most plausible one if none qualifies.
    static SelectionRule threshold(double minimum) {
        return SelectionRule(Mode::threshold, TraversalDegree(minimum).value());
    }

    /// Maximizes w * plausibility - (1 - w) * length / longest.
    static SelectionRule weighted(double w) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw std::out_of_range("weighted rule needs w in [0,1]");
        }
        return SelectionRule(Mode::weighted, w);
    }

    /// Parses "lex", "threshold=<value>" or "weighted=<value>".
    static SelectionRule parse(std::string_view text) {
        if (text == "lex") {
            return lex_plausibility();
        }
        const auto eq = text.find('=');
        if (eq != std::string_view::npos) {
            const auto name = text.substr(0, eq);
            const std::string value(text.substr(eq + 1));
            char* end = nullptr;
            const double v = std::strtod(value.c_str(), &end);
            if (!value.empty() && end == value.c_str() + value.size()) {
                if (name == "threshold") {
                    return threshold(v);
                }
                if (name == "weighted") {
                    return weighted(v);
                }
            }
        }
        throw std::invalid_argument("unknown selection rule '" + std::string(text) +
                                    "' (expected lex, threshold=<value> or weighted=<value>)");
    }

    Mode mode() const { return mode_; }
    double parameter() const { return parameter_; }

    std::string describe() const {
        char buf[64];
        switch (mode_) {
        case Mode::lex_plausibility:
            return "lex";
        case Mode::threshold:
            std::snprintf(buf, sizeof buf, "threshold=%.12g", parameter_);
            return buf;
        case Mode::weighted:
            std::snprintf(buf, sizeof buf, "weighted=%.12g", parameter_);
            return buf;
        }
        return {};
    }

    friend bool operator==(const SelectionRule&, const SelectionRule&) = default;

private:
    SelectionRule(Mode mode, double parameter) : mode_(mode), parameter_(parameter) {}

    Mode mode_;
    double parameter_;
};

namespace detail {

/// Canonical order used to break every remaining tie: higher plausibility,
/// then shorter, then lexicographically smaller waypoints.
inline bool canonical_before(const Candidate& x, const Candidate& y) {
    if (x.evaluation.plausibility != y.evaluation.plausibility) {
        return x.evaluation.plausibility > y.evaluation.plausibility;
    }
    if (!lengths_equal(x.evaluation.length, y.evaluation.length)) {
        return x.evaluation.length < y.evaluation.length;
    }
    return x.path < y.path;
}

inline std::size_t best_index(const std::vector<Candidate>& candidates,
                              const std::function<bool(const Candidate&, const Candidate&)>& better) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (better(candidates[i], candidates[best])) {
            best = i;
        }
    }
    return best;
}

} // namespace detail

/// Index of the candidate chosen by `rule`. The result does not depend on
/// the order of `candidates`, only on their content.
inline std::size_t select(const std::vector<Candidate>& candidates, const SelectionRule& rule) {
    if (candidates.empty()) {
        throw std::invalid_argument("select() needs at least one candidate");
    }
    const auto lex = [](const Candidate& x, const Candidate& y) { return detail::canonical_before(x, y); };

    switch (rule.mode()) {
    case SelectionRule::Mode::lex_plausibility:
        return detail::best_index(candidates, lex);

    case SelectionRule::Mode::threshold: {
        const TraversalDegree minimum(rule.parameter());
        const bool any = std::any_of(candidates.begin(), candidates.end(),
                                     [&](const Candidate& c) { return c.evaluation.plausibility >= minimum; });
        if (!any) {
            return detail::best_index(candidates, lex);
        }
        return detail::best_index(candidates, [&](const Candidate& x, const Candidate& y) {
            const bool xq = x.evaluation.plausibility >= minimum;
            const bool yq = y.evaluation.plausibility >= minimum;
            if (xq != yq) {
                return xq;
            }
            if (!lengths_equal(x.evaluation.length, y.evaluation.length)) {
                return x.evaluation.length < y.evaluation.length;
            }
            return detail::canonical_before(x, y);
        });
    }

    case SelectionRule::Mode::weighted: {
        double longest = 0.0;
        for (const auto& c : candidates) {
            longest = std::max(longest, c.evaluation.length);
        }
        const double w = rule.parameter();
        const auto utility = [&](const Candidate& c) {
            return w * c.evaluation.plausibility.value() - (1.0 - w) * c.evaluation.length / longest;
        };
        return detail::best_index(candidates, [&](const Candidate& x, const Candidate& y) {
            const double ux = utility(x);
            const double uy = utility(y);
            if (std::abs(ux - uy) > 1e-12) {
                return ux > uy;
            }
            return detail::canonical_before(x, y);
        });
    }
    }
    throw std::logic_error("unhandled selection mode");
}

/// The fuzzy n-valued path: every Pareto-optimal trade-off between length
/// and plausibility, sorted by decreasing plausibility, plus the chosen one.
struct FuzzyPlan {
    std::vector<Candidate> candidates;
    std::size_t chosen = 0;
    SelectionRule rule = SelectionRule::lex_plausibility();
    double resolution = 0.0;

    std::size_t n() const { return candidates.size(); }
    const Candidate& selected() const { return candidates.at(chosen); }

    friend bool operator==(const FuzzyPlan&, const FuzzyPlan&) = default;
};

/// Returns std::nullopt when no route with plausibility > 0 exists.
/// Throws InvalidScenario or GridError on bad input.
inline std::optional<FuzzyPlan> plan_fuzzy(const Scenario& s, double resolution, const SelectionRule& rule) {
    const GridGraph g = build_grid(s, resolution);
    auto candidates = pareto_search(g);
    if (candidates.empty()) {
        return std::nullopt;
    }
    FuzzyPlan plan;
    plan.chosen = select(candidates, rule);
    plan.candidates = std::move(candidates);
    plan.rule = rule;
    plan.resolution = resolution;
    return plan;
}

/// Plans again from `current` after the degrees of some obstacles were
/// re-estimated. `s` itself is left untouched.
inline std::optional<FuzzyPlan> replan(const Scenario& s, const Configuration& current,
                                       const std::map<std::string, TraversalDegree>& degree_updates,
                                       double resolution, const SelectionRule& rule) {
    if (!s.bounds.contains(current)) {
        throw OutOfBounds("current configuration outside workspace bounds");
    }
    Scenario updated = s;
    updated.start = current;
    for (const auto& [id, degree] : degree_updates) {
        const auto it = std::find_if(updated.obstacles.begin(), updated.obstacles.end(),
                                     [&](const Obstacle& o) { return o.id == id; });
        if (it == updated.obstacles.end()) {
            throw std::invalid_argument("degree update for unknown obstacle '" + id + "'");
        }
        it->degree = degree.value();
    }
    return plan_fuzzy(updated, resolution, rule);
}

enum class Weighting { uniform, plausibility_proportional };

/// Probability weights over the candidates of a plan (a random n-valued path).
class RandomPolicy {
public:
    explicit RandomPolicy(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) {
            throw std::invalid_argument("a policy needs at least one weight");
        }
        double sum = 0.0;
        for (const double p : weights_) {
            if (!(p >= 0.0)) {
                throw std::invalid_argument("policy weights must be >= 0");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument("policy weights must sum to 1");
        }
    }

    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }

private:
    std::vector<double> weights_;
};

inline RandomPolicy make_random_policy(const FuzzyPlan& plan, Weighting weighting) {
    const std::size_t n = plan.n();
    if (n == 0) {
        throw std::invalid_argument("plan has no candidates");
    }
    std::vector<double> weights(n);
    if (weighting == Weighting::uniform) {
        std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(n));
    } else {
        double total = 0.0;
        for (const auto& c : plan.candidates) {
            total += c.evaluation.plausibility.value();
        }
        for (std::size_t j = 0; j < n; ++j) {
            weights[j] = plan.candidates[j].evaluation.plausibility.value() / total;
        }
    }
    return RandomPolicy(std::move(weights));
}

/// Seeded draws from a policy. Uses mt19937_64 and maps the top 53 bits to
/// [0,1) directly, so the stream depends only on the seed.
class PolicySampler {
public:
    PolicySampler(const RandomPolicy& policy, std::uint64_t seed) : policy_(policy), engine_(seed) {}

    std::size_t next() {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const auto& w = policy_.weights();
        double cumulative = 0.0;
        for (std::size_t j = 0; j + 1 < w.size(); ++j) {
            cumulative += w[j];
            if (u < cumulative) {
                return j;
            }
        }
        // Rounding may leave the tail short of 1; the last positive weight absorbs it.
        std::size_t last = w.size() - 1;
        while (last > 0 && w[last] == 0.0) {
            --last;
        }
        return last;
    }

private:
    RandomPolicy policy_;
    std::mt19937_64 engine_;
};

inline std::size_t sample(const RandomPolicy& policy, std::uint64_t seed) {
    return PolicySampler(policy, seed).next();
}

} // namespace fuzzyplan
