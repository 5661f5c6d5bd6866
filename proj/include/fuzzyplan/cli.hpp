#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "documents.hpp"
#include "planner.hpp"
#include "search.hpp"
#include "svg.hpp"
#include "world.hpp"

namespace fuzzyplan::cli {

/// Process exit codes. Stable: scripts depend on them.
enum ExitCode : int { success = 0, input_error = 1, no_path = 2, oracle_mismatch = 3 };

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DocumentError(path + ": cannot open file");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(path.string() + ": cannot write output file");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error(path.string() + ": write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error(path.string() + ": cannot move output into place");
    }
}

inline Scenario load_scenario(const std::string& path, std::ostream& err) {
    Scenario s;
    try {
        s = document::parse_scenario(read_file(path));
    } catch (const DocumentError& e) {
        throw DocumentError(path + ": " + e.what());
    }
    const auto report = validate_scenario(s);
    for (const auto& w : report.warnings) {
        err << "warning: " << path << ": " << w.field << ": " << w.message << "\n";
    }
    if (!report.ok()) {
        std::string message = path + ": invalid scenario";
        for (const auto& v : report.violations) {
            message += "\n  " + v.field + ": " + v.message;
        }
        throw DocumentError(message);
    }
    return s;
}

inline bool same_front(const std::vector<Candidate>& a, const std::vector<Candidate>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].evaluation.plausibility != b[i].evaluation.plausibility ||
            !lengths_equal(a[i].evaluation.length, b[i].evaluation.length)) {
            return false;
        }
    }
    return true;
}

struct Options {
    std::string scenario;
    double resolution = 1.0;
    std::string rule = "lex";
    std::string mode = "fuzzy";
    std::string result;
    std::string out_path;
    std::size_t budget = 16;
    std::string weighting = "uniform";
    std::uint64_t seed = 0;
    std::size_t draws = 1000;
};

inline int cmd_plan(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario s = load_scenario(o.scenario, err);
    if (o.mode == "classical") {
        const GridGraph g = build_grid(s, o.resolution);
        const auto path = classical_shortest(g);
        if (!path) {
            err << "NoPath\n";
            return no_path;
        }
        Candidate c{*path, evaluate_path(*path, s)};
        out << document::classical_json(c, o.resolution).dump(2) << "\n";
        return success;
    }
    const auto plan = plan_fuzzy(s, o.resolution, SelectionRule::parse(o.rule));
    if (!plan) {
        err << "NoPlausiblePath\n";
        return no_path;
    }
    out << document::plan_json(*plan).dump(2) << "\n";
    return success;
}

inline int cmd_render(const Options& o, std::ostream& err) {
    const Scenario s = load_scenario(o.scenario, err);
    std::optional<document::ResultOverlay> overlay;
    if (!o.result.empty()) {
        try {
            overlay = document::parse_result(read_file(o.result));
        } catch (const DocumentError& e) {
            throw DocumentError(o.result + ": " + e.what());
        }
    }
    write_file_atomically(o.out_path, svg::render(s, overlay));
    return success;
}

inline int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario s = load_scenario(o.scenario, err);
    const GridGraph g = build_grid(s, o.resolution);
    const auto exact = enumerate_paths_oracle(g, o.budget);
    const auto searched = pareto_search(g);
    const bool match = same_front(exact, searched);

    document::Json j;
    j["mode"] = "oracle";
    j["resolution"] = document::round12(o.resolution);
    j["budget"] = o.budget;
    j["n"] = exact.size();
    j["candidates"] = document::candidates_json(exact);
    j["search"] = {{"n", searched.size()}, {"candidates", document::candidates_json(searched)}};
    j["verdict"] = match ? "MATCH" : "MISMATCH";
    out << j.dump(2) << "\n" << (match ? "MATCH" : "MISMATCH") << "\n";
    return match ? success : oracle_mismatch;
}

inline int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario s = load_scenario(o.scenario, err);
    Weighting weighting;
    if (o.weighting == "uniform") {
        weighting = Weighting::uniform;
    } else if (o.weighting == "plausibility") {
        weighting = Weighting::plausibility_proportional;
    } else {
        throw std::invalid_argument("--weighting must be uniform or plausibility");
    }
    const auto plan = plan_fuzzy(s, o.resolution, SelectionRule::parse(o.rule));
    if (!plan) {
        err << "NoPlausiblePath\n";
        return no_path;
    }
    const RandomPolicy policy = make_random_policy(*plan, weighting);
    PolicySampler sampler(policy, o.seed);
    std::vector<std::size_t> counts(policy.size(), 0);
    for (std::size_t k = 0; k < o.draws; ++k) {
        ++counts[sampler.next()];
    }

    document::Json j = document::plan_json(*plan);
    j["mode"] = "sample";
    j["weighting"] = o.weighting;
    j["weights"] = document::Json::array();
    for (const double w : policy.weights()) {
        j["weights"].push_back(document::round12(w));
    }
    j["seed"] = o.seed;
    j["draw"] = sample(policy, o.seed);
    j["draws"] = o.draws;
    j["counts"] = counts;
    j["frequencies"] = document::Json::array();
    for (const auto c : counts) {
        j["frequencies"].push_back(
            document::round12(o.draws == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(o.draws)));
    }
    out << j.dump(2) << "\n";
    return success;
}

} // namespace detail

/// Runs the command line. `args` excludes the program name. Output goes to
/// `out` only once a command has fully succeeded.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fuzzy motion planning: paths that trade length against obstacle plausibility"};
    app.name("fuzzyplan");
    app.require_subcommand(1);
    detail::Options o;

    auto* plan = app.add_subcommand("plan", "Plan a path and print the result document");
    plan->add_option("scenario", o.scenario, "Scenario file")->required();
    plan->add_option("--resolution", o.resolution, "Lattice cell size")->check(CLI::PositiveNumber);
    plan->add_option("--rule", o.rule, "lex | threshold=<lambda_min> | weighted=<w>");
    plan->add_option("--mode", o.mode, "fuzzy | classical")->check(CLI::IsMember({"fuzzy", "classical"}));

    auto* render = app.add_subcommand("render", "Draw a scenario and optionally a result as SVG");
    render->add_option("scenario", o.scenario, "Scenario file")->required();
    render->add_option("--result", o.result, "Result document from 'plan'");
    render->add_option("--out", o.out_path, "SVG output file")->required();

    auto* oracle = app.add_subcommand("oracle", "Compare the Pareto search against exhaustive enumeration");
    oracle->add_option("scenario", o.scenario, "Scenario file")->required();
    oracle->add_option("--resolution", o.resolution, "Lattice cell size")->check(CLI::PositiveNumber);
    oracle->add_option("--budget", o.budget, "Maximum lattice nodes to enumerate over");

    auto* sample = app.add_subcommand("sample", "Draw candidate indices from a random policy over the plan");
    sample->add_option("scenario", o.scenario, "Scenario file")->required();
    sample->add_option("--resolution", o.resolution, "Lattice cell size")->check(CLI::PositiveNumber);
    sample->add_option("--rule", o.rule, "Selection rule for the reported chosen index");
    sample->add_option("--weighting", o.weighting, "uniform | plausibility")
        ->check(CLI::IsMember({"uniform", "plausibility"}));
    sample->add_option("--seed", o.seed, "Generator seed");
    sample->add_option("--draws", o.draws, "Number of draws");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }

    try {
        std::ostringstream buffer;
        int code = success;
        if (plan->parsed()) {
            code = detail::cmd_plan(o, buffer, err);
        } else if (render->parsed()) {
            code = detail::cmd_render(o, err);
        } else if (oracle->parsed()) {
            code = detail::cmd_oracle(o, buffer, err);
        } else {
            code = detail::cmd_sample(o, buffer, err);
        }
        out << buffer.str();
        out.flush();
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
}

} // namespace fuzzyplan::cli
