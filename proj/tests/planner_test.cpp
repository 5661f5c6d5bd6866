#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <fuzzyplan/planner.hpp>

#include "support/random_scenarios.hpp"

namespace fuzzyplan {
namespace {

Scenario terrain() {
    Scenario s;
    s.bounds = {0, 0, 20, 10};
    s.obstacles = {{"ridge", Rect{4, 2, 6, 11}, 0.6},
                   {"dune", Rect{9, -1, 11, 8}, 0.8},
                   {"crater", Circle{15, 5, 2.5}, 0.5}};
    s.start = {1, 5};
    s.goal = {19, 5};
    return s;
}

Candidate synthetic(double length, double lambda, double tag) {
    return {Path({{0, 0}, {tag, 1}}), PathEvaluation{length, TraversalDegree(lambda), {}}};
}

std::vector<Candidate> two_candidates() { return {synthetic(8, 0.5, 1), synthetic(16, 1.0, 2)}; }

TEST(SelectionRule, ParseAndDescribe) {
    EXPECT_EQ(SelectionRule::parse("lex"), SelectionRule::lex_plausibility());
    EXPECT_EQ(SelectionRule::parse("threshold=0.4"), SelectionRule::threshold(0.4));
    EXPECT_EQ(SelectionRule::parse("weighted=0.25").describe(), "weighted=0.25");
    EXPECT_THROW(SelectionRule::parse("threshold=1.5"), std::out_of_range);
    EXPECT_THROW(SelectionRule::parse("weighted=-1"), std::out_of_range);
    EXPECT_THROW(SelectionRule::parse("threshold="), std::invalid_argument);
    EXPECT_THROW(SelectionRule::parse("best"), std::invalid_argument);
}

TEST(Select, Examples) {
    const auto c = two_candidates();
    EXPECT_EQ(select(c, SelectionRule::lex_plausibility()), 1u);
    EXPECT_EQ(select(c, SelectionRule::threshold(0.4)), 0u);
    // u = 0.25 - 0.25 = 0 and u = 0.5 - 0.5 = 0: tie goes to the higher plausibility.
    EXPECT_EQ(select(c, SelectionRule::weighted(0.5)), 1u);
}

TEST(Select, ThresholdFallsBackToMostPlausible) {
    const std::vector<Candidate> c = {synthetic(8, 0.25, 1), synthetic(12, 0.5, 2)};
    EXPECT_EQ(select(c, SelectionRule::threshold(0.75)), 1u);
}

TEST(Select, WeightedExtremes) {
    const auto c = two_candidates();
    EXPECT_EQ(select(c, SelectionRule::weighted(1.0)), 1u);
    EXPECT_EQ(select(c, SelectionRule::weighted(0.0)), 0u);
}

TEST(Select, EmptyIsAnError) {
    EXPECT_THROW(select({}, SelectionRule::lex_plausibility()), std::invalid_argument);
}

TEST(SelectProperties, CovariantUnderPermutation) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<SelectionRule> rules = {SelectionRule::lex_plausibility(), SelectionRule::threshold(0.5),
                                              SelectionRule::threshold(0.9), SelectionRule::weighted(0.3),
                                              SelectionRule::weighted(0.5), SelectionRule::weighted(0.8)};
    for (int trial = 0; trial < 300; ++trial) {
        // Non-dominated set: plausibility strictly decreasing, length strictly decreasing.
        const int n = 1 + trial % 6;
        std::vector<Candidate> c;
        double lambda = 1.0;
        double length = 30.0;
        for (int k = 0; k < n; ++k) {
            c.push_back(synthetic(length, lambda, k + 1));
            lambda = std::max(0.01, lambda - 0.05 - 0.2 * unit(rng));
            length -= 0.5 + 4 * unit(rng);
        }
        for (const auto& rule : rules) {
            const auto expected = c[select(c, rule)];
            auto shuffled = c;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            EXPECT_EQ(shuffled[select(shuffled, rule)], expected);
        }
        // "Smaller plausibility, less plausible": lex never picks a strictly less plausible candidate.
        const auto& chosen = c[select(c, SelectionRule::lex_plausibility())];
        for (const auto& other : c) {
            EXPECT_GE(chosen.evaluation.plausibility, other.evaluation.plausibility);
        }
    }
}

TEST(PlanFuzzy, ObstacleFreeHasSingleCandidate) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    s.start = {1, 1};
    s.goal = {8, 6};
    for (const auto& rule : {SelectionRule::lex_plausibility(), SelectionRule::threshold(0.3), SelectionRule::weighted(0.2)}) {
        const auto plan = plan_fuzzy(s, 1.0, rule);
        ASSERT_TRUE(plan);
        EXPECT_EQ(plan->n(), 1u);
        EXPECT_EQ(plan->chosen, 0u);
        EXPECT_EQ(plan->selected().evaluation.plausibility.value(), 1.0);
    }
}

TEST(PlanFuzzy, TerrainLexChoosesTheDetour) {
    const auto plan = plan_fuzzy(terrain(), 0.5, SelectionRule::lex_plausibility());
    ASSERT_TRUE(plan);
    ASSERT_GE(plan->n(), 2u);
    const auto& chosen = plan->selected();
    EXPECT_EQ(chosen.evaluation.plausibility.value(), 1.0);
    EXPECT_TRUE(chosen.evaluation.penetrated.empty());
    const auto& straight = plan->candidates.back();
    EXPECT_EQ(straight.evaluation.penetrated.size(), 3u);
    EXPECT_DOUBLE_EQ(straight.evaluation.length, 18.0);
    EXPECT_GT(chosen.evaluation.length, straight.evaluation.length);
}

TEST(PlanFuzzy, TerrainThresholdChoosesTheStraightLine) {
    const auto s = terrain();
    ASSERT_TRUE(std::all_of(s.obstacles.begin(), s.obstacles.end(), [](const Obstacle& o) { return o.degree >= 0.4; }));
    const auto plan = plan_fuzzy(s, 0.5, SelectionRule::threshold(0.4));
    ASSERT_TRUE(plan);
    const auto& chosen = plan->selected();
    // Euclidean distance A-B is a lower bound for every path, and the straight candidate attains it.
    EXPECT_DOUBLE_EQ(chosen.evaluation.length, distance(s.start, s.goal));
    EXPECT_EQ(chosen.path.waypoints().front(), s.start);
    EXPECT_EQ(chosen.evaluation.penetrated.size(), 3u);
}

TEST(PlanFuzzy, NoPlausiblePath) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    s.start = {1, 5};
    s.goal = {9, 5};
    s.obstacles = {{"wall", Rect{4, -1, 6, 11}, 0.0}};
    EXPECT_FALSE(plan_fuzzy(s, 1.0, SelectionRule::lex_plausibility()));
}

TEST(PlanFuzzy, InvalidScenarioThrows) {
    auto s = terrain();
    s.obstacles[0].degree = 2.0;
    EXPECT_THROW(plan_fuzzy(s, 1.0, SelectionRule::lex_plausibility()), InvalidScenario);
}

TEST(PlanFuzzyProperties, SectionLaw) {
    testing::ScenarioGenerator gen(31);
    testing::ScenarioGenerator::Options opt;
    opt.max_nodes = 100;
    for (int i = 0; i < 200; ++i) {
        const auto [s, h] = gen.next(opt);
        const auto plan = plan_fuzzy(s, h, SelectionRule::lex_plausibility());
        if (!plan) {
            continue;
        }
        for (const auto& c : plan->candidates) {
            EXPECT_EQ(endpoints(c.path), std::make_pair(s.start, s.goal));
        }
    }
}

TEST(PlanFuzzyProperties, RaisingDegreesNeverLowersChosenPlausibility) {
    testing::ScenarioGenerator gen(32);
    testing::ScenarioGenerator::Options opt;
    opt.max_nodes = 60;
    opt.max_obstacles = 5;
    for (int i = 0; i < 200; ++i) {
        auto [s, h] = gen.next(opt);
        if (s.obstacles.empty()) {
            continue;
        }
        const auto before = plan_fuzzy(s, h, SelectionRule::lex_plausibility());
        auto raised = s;
        auto& o = raised.obstacles[static_cast<std::size_t>(i) % raised.obstacles.size()];
        o.degree = std::min(1.0, o.degree + 0.25);
        const auto after = plan_fuzzy(raised, h, SelectionRule::lex_plausibility());
        const double lb = before ? before->selected().evaluation.plausibility.value() : 0.0;
        const double la = after ? after->selected().evaluation.plausibility.value() : 0.0;
        EXPECT_GE(la, lb);
    }
}

TEST(Replan, NoUpdateIsIdentity) {
    const auto s = terrain();
    const auto rule = SelectionRule::lex_plausibility();
    EXPECT_EQ(replan(s, s.start, {}, 0.5, rule), plan_fuzzy(s, 0.5, rule));
}

TEST(Replan, ImpenetrableUpdateIsAvoided) {
    const auto s = terrain();
    const auto rule = SelectionRule::threshold(0.4);
    const auto first = plan_fuzzy(s, 0.5, rule);
    ASSERT_TRUE(first);
    ASSERT_TRUE(first->selected().evaluation.penetrated.count("dune"));
    const Configuration current = first->selected().path.waypoints()[4];
    const auto second = replan(s, current, {{"dune", TraversalDegree(0.0)}}, 0.5, rule);
    ASSERT_TRUE(second);
    for (const auto& c : second->candidates) {
        EXPECT_FALSE(c.evaluation.penetrated.count("dune"));
        EXPECT_EQ(c.path.front(), current);
    }
    EXPECT_EQ(s.obstacles[1].degree, 0.8) << "input scenario must not change";
}

TEST(Replan, DegreeOneNoLongerLimitsPlausibility) {
    const auto s = terrain();
    const auto plan = replan(s, s.start, {{"crater", TraversalDegree(1.0)}}, 0.5, SelectionRule::lex_plausibility());
    ASSERT_TRUE(plan);
    for (const auto& c : plan->candidates) {
        double expected = 1.0;
        for (const auto& o : s.obstacles) {
            if (o.id != "crater" && c.evaluation.penetrated.count(o.id)) {
                expected = std::min(expected, o.degree);
            }
        }
        EXPECT_EQ(c.evaluation.plausibility.value(), expected);
    }
    // Going straight through the crater is now free of cost beyond the others.
    EXPECT_EQ(plan->candidates.back().evaluation.plausibility.value(), 0.6);
}

TEST(Replan, Errors) {
    const auto s = terrain();
    EXPECT_THROW(replan(s, {30, 5}, {}, 0.5, SelectionRule::lex_plausibility()), OutOfBounds);
    EXPECT_THROW(replan(s, s.start, {{"nope", TraversalDegree(0.5)}}, 0.5, SelectionRule::lex_plausibility()),
                 std::invalid_argument);
}

FuzzyPlan plan_with_degrees(std::vector<double> lambdas) {
    FuzzyPlan plan;
    double length = 10;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        plan.candidates.push_back(synthetic(length, lambdas[k], static_cast<double>(k + 1)));
        length -= 1;
    }
    return plan;
}

TEST(RandomPolicy, Examples) {
    EXPECT_EQ(make_random_policy(plan_with_degrees({1.0, 0.5}), Weighting::uniform).weights(),
              (std::vector<double>{0.5, 0.5}));
    const auto p = make_random_policy(plan_with_degrees({0.5, 1.0}), Weighting::plausibility_proportional);
    EXPECT_DOUBLE_EQ(p.weights()[0], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(p.weights()[1], 2.0 / 3.0);
    for (const auto w : {Weighting::uniform, Weighting::plausibility_proportional}) {
        EXPECT_EQ(make_random_policy(plan_with_degrees({0.7}), w).weights(), std::vector<double>{1.0});
    }
}

TEST(RandomPolicy, RejectsInvalidWeights) {
    EXPECT_THROW(RandomPolicy({}), std::invalid_argument);
    EXPECT_THROW(RandomPolicy({0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(RandomPolicy({1.5, -0.5}), std::invalid_argument);
}

TEST(RandomPolicy, WeightsAlwaysNormalized) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.001, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> lambdas(1 + trial % 9);
        for (auto& l : lambdas) {
            l = unit(rng);
        }
        for (const auto w : {Weighting::uniform, Weighting::plausibility_proportional}) {
            const auto p = make_random_policy(plan_with_degrees(lambdas), w);
            const double sum = std::accumulate(p.weights().begin(), p.weights().end(), 0.0);
            EXPECT_NEAR(sum, 1.0, 1e-12);
            EXPECT_TRUE(std::all_of(p.weights().begin(), p.weights().end(), [](double x) { return x >= 0; }));
        }
    }
}

TEST(Sample, DegenerateAlwaysZero) {
    const RandomPolicy p({1.0});
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        EXPECT_EQ(sample(p, seed), 0u);
    }
}

TEST(Sample, EmpiricalFrequency) {
    const RandomPolicy p({1.0 / 3.0, 2.0 / 3.0});
    // 0.02 is more than four standard errors of a binomial(10000, 2/3) proportion (sd 0.0047).
    for (std::uint64_t seed : {1u, 42u, 2024u}) {
        PolicySampler sampler(p, seed);
        int second = 0;
        for (int k = 0; k < 10000; ++k) {
            second += sampler.next() == 1 ? 1 : 0;
        }
        EXPECT_NEAR(second / 10000.0, 2.0 / 3.0, 0.02);
    }
}

TEST(Sample, ReproducibleForFixedSeed) {
    const RandomPolicy p({0.2, 0.3, 0.5});
    PolicySampler a(p, 42);
    PolicySampler b(p, 42);
    std::vector<std::size_t> da, db;
    for (int k = 0; k < 1000; ++k) {
        da.push_back(a.next());
        db.push_back(b.next());
    }
    EXPECT_EQ(da, db);
    EXPECT_EQ(sample(p, 42), da.front());
}

TEST(Sample, ZeroWeightIsNeverDrawn) {
    const RandomPolicy p({0.5, 0.0, 0.5});
    PolicySampler sampler(p, 5);
    for (int k = 0; k < 5000; ++k) {
        EXPECT_NE(sampler.next(), 1u);
    }
}

} // namespace
} // namespace fuzzyplan
