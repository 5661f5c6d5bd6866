#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <fuzzyplan/world.hpp>

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

bool has_violation(const ValidationReport& r, const std::string& message) {
    for (const auto& v : r.violations) {
        if (v.message.find(message) != std::string::npos) {
            return true;
        }
    }
    return false;
}

TEST(TraversalDegree, RejectsValuesOutsideUnitInterval) {
    EXPECT_THROW(TraversalDegree(1.3), std::out_of_range);
    EXPECT_THROW(TraversalDegree(-0.01), std::out_of_range);
    EXPECT_THROW(TraversalDegree(std::nan("")), std::out_of_range);
    EXPECT_DOUBLE_EQ(TraversalDegree(0.0).value(), 0.0);
    EXPECT_DOUBLE_EQ(TraversalDegree(1.0).value(), 1.0);
}

TEST(ValidateScenario, DegreeOutOfRange) {
    auto s = terrain();
    s.obstacles[1].degree = 1.3;
    const auto report = validate_scenario(s);
    EXPECT_FALSE(report.ok());
    EXPECT_TRUE(has_violation(report, "degree out of [0,1]"));
    EXPECT_EQ(report.violations.front().field, "obstacles[1].degree");
}

TEST(ValidateScenario, StartEqualsGoal) {
    auto s = terrain();
    s.goal = s.start;
    EXPECT_TRUE(has_violation(validate_scenario(s), "start equals goal"));
}

TEST(ValidateScenario, TerrainIsValid) {
    const auto report = validate_scenario(terrain());
    EXPECT_TRUE(report.ok()) << report.summary();
    EXPECT_TRUE(report.warnings.empty());
}

TEST(ValidateScenario, ListsEveryViolation) {
    auto s = terrain();
    s.obstacles[0].id = "dune";
    s.obstacles[2].shape = Circle{15, 5, 0};
    s.profile.radius = -1;
    const auto report = validate_scenario(s);
    EXPECT_TRUE(has_violation(report, "duplicate id"));
    EXPECT_TRUE(has_violation(report, "circle radius"));
    EXPECT_TRUE(has_violation(report, "must be >= 0"));
    EXPECT_EQ(report.violations.size(), 3u);
}

TEST(ValidateScenario, EndpointOutsideBounds) {
    auto s = terrain();
    s.goal = {21, 5};
    EXPECT_TRUE(has_violation(validate_scenario(s), "outside workspace bounds"));
}

TEST(ValidateScenario, StartInsideImpenetrableObstacleIsViolation) {
    auto s = terrain();
    s.start = {5, 5};
    s.obstacles[0].degree = 0.0;
    EXPECT_TRUE(has_violation(validate_scenario(s), "impenetrable"));
}

TEST(ValidateScenario, StartInsidePenetrableObstacleIsWarning) {
    auto s = terrain();
    s.start = {5, 5};
    const auto report = validate_scenario(s);
    EXPECT_TRUE(report.ok());
    ASSERT_EQ(report.warnings.size(), 1u);
    EXPECT_EQ(report.warnings[0].field, "start");
}

TEST(ValidateScenario, SoftnessCanLiftImpenetrabilityOnlyAboveZero) {
    auto s = terrain();
    s.start = {5, 5};
    s.obstacles[0].degree = 0.0;
    s.profile.softness = 10;
    EXPECT_FALSE(validate_scenario(s).ok());
}

TEST(EffectiveDegree, Examples) {
    EXPECT_DOUBLE_EQ(effective_degree(TraversalDegree(0.5), 0.0).value(), 0.5);
    EXPECT_DOUBLE_EQ(effective_degree(TraversalDegree(0.0), 5.0).value(), 0.0);
    EXPECT_NEAR(effective_degree(TraversalDegree(0.5), 1.0).value(), 0.70711, 1e-5);
    EXPECT_DOUBLE_EQ(effective_degree(TraversalDegree(0.5), 1.0).value(), std::sqrt(0.5));
}

TEST(EffectiveDegree, OrderPreservingForFixedSoftness) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> soft(0.0, 20.0);
    for (int i = 0; i < 2000; ++i) {
        double a = unit(rng);
        double b = unit(rng);
        if (a > b) {
            std::swap(a, b);
        }
        const double phi = soft(rng);
        EXPECT_LE(effective_degree(TraversalDegree(a), phi), effective_degree(TraversalDegree(b), phi));
    }
}

TEST(EffectiveDegree, IdentityAtZeroSoftness) {
    for (int k = 0; k <= 100; ++k) {
        const double lambda = k / 100.0;
        EXPECT_EQ(effective_degree(TraversalDegree(lambda), 0.0).value(), lambda);
    }
}

TEST(EffectiveDegree, ApproachesOneAsSoftnessGrows) {
    for (const double lambda : {0.01, 0.25, 0.5, 0.9}) {
        double previous = 0.0;
        for (const double phi : {0.0, 1.0, 10.0, 100.0}) {
            const double v = effective_degree(TraversalDegree(lambda), phi).value();
            EXPECT_GT(v, previous);
            EXPECT_LT(v, 1.0);
            previous = v;
        }
        EXPECT_GT(effective_degree(TraversalDegree(lambda), 1e6).value(), 0.9999);
    }
}

TEST(EffectiveDegree, ZeroIffZero) {
    EXPECT_EQ(effective_degree(TraversalDegree(0.0), 1e9).value(), 0.0);
    EXPECT_GT(effective_degree(TraversalDegree(1e-300), 0.0).value(), 0.0);
}

TEST(IsFree, EmptyWorkspaceIsFree) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    s.profile.radius = 2;
    for (double x = 0; x <= 10; x += 2.5) {
        EXPECT_TRUE(is_free({x, 3}, s));
    }
}

TEST(IsFree, DegreeDoesNotMatter) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    s.obstacles = {{"r", Rect{2, 2, 6, 6}, 0.9}};
    EXPECT_FALSE(is_free({4, 4}, s));
}

TEST(IsFree, DiscTangency) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    s.obstacles = {{"c", Circle{5, 5, 1.5}, 0.3}};
    s.profile.radius = 0.5;
    const double eps = 1e-6;
    EXPECT_TRUE(is_free({5 + 2.0 + eps, 5}, s));
    EXPECT_FALSE(is_free({5 + 2.0 - eps, 5}, s));
    EXPECT_TRUE(is_free({5 + 2.0, 5}, s)) << "exact contact leaves the open obstacle untouched";
}

TEST(IsFree, OutOfBoundsIsAnError) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    EXPECT_THROW(is_free({11, 5}, s), OutOfBounds);
}

TEST(IsFree, ZeroRadiusMatchesPointInShape) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    const Rect r{2, 3, 7, 5};
    const Circle c{6, 7, 1.75};
    s.obstacles = {{"r", r, 0.5}, {"c", c, 0.5}};
    for (int i = 0; i < 5000; ++i) {
        // Snap half the samples onto a coarse lattice to hit boundaries.
        Configuration q{coord(rng), coord(rng)};
        if (i % 2 == 0) {
            q = {std::round(q.x * 4) / 4, std::round(q.y * 4) / 4};
        }
        const bool in_rect = q.x > r.xmin && q.x < r.xmax && q.y > r.ymin && q.y < r.ymax;
        const bool in_circle = std::hypot(q.x - c.cx, q.y - c.cy) < c.radius;
        EXPECT_EQ(is_free(q, s), !(in_rect || in_circle)) << q.x << "," << q.y;
    }
}

TEST(Geometry, InflatedRectangleHasRoundedCorners) {
    Scenario s;
    s.bounds = {0, 0, 10, 10};
    s.obstacles = {{"r", Rect{4, 4, 6, 6}, 0.5}};
    s.profile.radius = 1.0;
    EXPECT_FALSE(is_free({3.4, 3.4}, s)); // 0.85 from the corner
    EXPECT_TRUE(is_free({3.2, 3.2}, s));  // 1.13 from the corner, inside the square hull
    EXPECT_FALSE(is_free({3.1, 5.0}, s)); // 0.9 from the left side
}

} // namespace
} // namespace fuzzyplan
