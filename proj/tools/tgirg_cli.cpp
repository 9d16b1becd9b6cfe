// Command-line front end: sampling, scaling sweeps, verification suites, towers,
// lower-bound probes and routing certification.
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tgirg/experiments.hpp"
#include "tgirg/sampler.hpp"

namespace {

using namespace tgirg;

constexpr int kOk = 0, kUsage = 1, kIo = 2, kInvariant = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

void emit_summary(const ExperimentConfig& cfg, const std::string& json) {
    if (cfg.output.empty() || cfg.output == "-")
        std::cerr << json << '\n';
    else
        std::cout << json << '\n';
}

void add_model_options(CLI::App* sub, ExperimentConfig& cfg, bool ranges) {
    if (ranges) {
        sub->add_option("--n", cfg.n, "torus volume (list)")->delimiter(',');
        sub->add_option("--tau", cfg.tau, "power-law exponent (list)")->delimiter(',');
        sub->add_option("--lambda", cfg.lambda, "intensity (list)")->delimiter(',');
        sub->add_option("--d", cfg.d, "dimension (list)")->delimiter(',');
        sub->add_option("--seeds", cfg.seeds, "seeds per parameter point");
    } else {
        sub->add_option("--n", cfg.n.front(), "torus volume");
        sub->add_option("--tau", cfg.tau.front(), "power-law exponent");
        sub->add_option("--lambda", cfg.lambda.front(), "intensity");
        sub->add_option("--d", cfg.d.front(), "dimension");
    }
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--p", cfg.edge_prob, "edge retention probability");
    sub->add_option("--d0", cfg.d0_target, "finest box side target");
    sub->add_option("-o,--output", cfg.output, "output file (stdout if omitted)");
}

void add_tower_options(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--cutoff", cfg.towers.cutoff, "tower cutoff level");
    sub->add_option("--eps", cfg.towers.eps, "high-weight exponent");
    sub->add_option("--c3", cfg.towers.c3, "stray diameter exponent");
}

int cmd_sample(ExperimentConfig& cfg) {
    cfg.validate();
    const ModelParams p = expand_trials(cfg).front().params;
    const GirgGraph g = sample_girg(p);
    std::ostringstream os;
    write_girg(os, g);
    emit(cfg.output, os.str());
    (cfg.output.empty() ? std::cerr : std::cout)
        << "vertices " << g.size() << " edges " << g.graph.num_edges() << '\n';
    return kOk;
}

int cmd_scaling(ExperimentConfig& cfg) {
    const ScalingReport rep = run_scaling(cfg);
    std::ostringstream os;
    write_scaling_csv(os, cfg, rep);
    emit(cfg.output, os.str());
    double worst = 0.0;
    std::size_t failed = 0;
    for (const auto& r : rep.rows) {
        if (r.ok) worst = std::max(worst, r.ratio);
        failed += !r.ok;
    }
    nlohmann::ordered_json j;
    j["slope"] = rep.fit.slope;
    j["intercept"] = rep.fit.intercept;
    j["r2"] = rep.fit.r2;
    j["points"] = rep.fit.points;
    j["flat"] = rep.fit.flat;
    j["r2_runs"] = rep.fit_runs.r2;
    j["failed_rows"] = failed;
    j["max_diameter_over_log2n"] = worst;
    emit_summary(cfg, j.dump());
    return kOk;
}

int cmd_verify(ExperimentConfig& cfg) {
    const auto suites = run_verify(cfg);
    std::ostringstream os;
    write_verify_csv(os, cfg, suites);
    emit(cfg.output, os.str());
    int code = kOk;
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& s : suites) {
        j[s.name] = s.passed ? "pass" : (s.hard ? "fail" : "warn");
        if (!s.passed && s.hard) {
            std::cerr << "verify: suite " << s.name << " failed (" << s.failures << " of " << s.checked << ")\n";
            code = kInvariant;
        } else if (!s.passed) {
            std::cerr << "warning: suite " << s.name << " counted " << s.failures << " failures of " << s.checked
                      << '\n';
        }
    }
    emit_summary(cfg, j.dump());
    return code;
}

int cmd_towers(ExperimentConfig& cfg) {
    const auto rows = run_towers(cfg);
    std::ostringstream os;
    write_towers_csv(os, cfg, rows);
    emit(cfg.output, os.str());
    std::map<int, std::pair<std::size_t, std::size_t>> per_cutoff;
    for (const auto& r : rows) {
        per_cutoff[r.cutoff].first += r.active;
        per_cutoff[r.cutoff].second += r.towers;
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& [cutoff, c] : per_cutoff)
        j.push_back({{"cutoff", cutoff}, {"active_rate", c.second ? double(c.first) / c.second : 0.0}});
    emit_summary(cfg, j.dump());
    return kOk;
}

int cmd_lowerbound(ExperimentConfig& cfg) {
    const auto rows = run_lowerbound(cfg);
    std::ostringstream os;
    write_lowerbound_csv(os, cfg, rows);
    emit(cfg.output, os.str());
    std::map<double, Distance> best;
    std::size_t probes = 0;
    for (const auto& r : rows) {
        best[r.params.n] = std::max(best[r.params.n], r.component_diameter);
        probes += r.probe_success;
    }
    nlohmann::ordered_json j;
    j["max_low_weight_diameter"] = nlohmann::ordered_json::array();
    for (const auto& [n, diam] : best) j["max_low_weight_diameter"].push_back({{"n", n}, {"diameter", diam}});
    j["probe_successes"] = probes;
    emit_summary(cfg, j.dump());
    return kOk;
}

int cmd_route(ExperimentConfig& cfg) {
    const auto rows = run_route(cfg);
    std::ostringstream os;
    write_route_csv(os, cfg, rows);
    emit(cfg.output, os.str());
    emit_summary(cfg, route_summary_json(rows));
    if (cfg.edge_prob >= 1.0)
        for (const auto& r : rows)
            if (!r.ok) {
                std::cerr << "route: walk " << r.u << "-" << r.v << " failed: " << r.problem << '\n';
                return kInvariant;
            }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold GIRG sampling and diameter analysis"};
    app.require_subcommand(1);
    ExperimentConfig cfg;

    auto* sample = app.add_subcommand("sample", "sample one graph and write it in text form");
    add_model_options(sample, cfg, false);
    auto* scaling = app.add_subcommand("scaling", "largest-component diameter against log2 n");
    add_model_options(scaling, cfg, true);
    auto* verify = app.add_subcommand("verify", "run the structural verification suites");
    add_model_options(verify, cfg, false);
    verify->add_option("--pairs", cfg.pairs, "vertex pairs for region and walk suites");
    auto* towers = app.add_subcommand("towers", "tower activity per cutoff");
    add_model_options(towers, cfg, true);
    add_tower_options(towers, cfg);
    auto* lower = app.add_subcommand("lowerbound", "low-weight component scan and witness probe");
    add_model_options(lower, cfg, true);
    lower->add_option("--c1", cfg.c1_prime, "probe volume constant (0: smallest usable)");
    auto* route = app.add_subcommand("route", "confined-walk certification on random pairs");
    add_model_options(route, cfg, true);
    route->add_option("--pairs", cfg.pairs, "vertex pairs per trial");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        for (auto* sub : app.get_subcommands()) {
            cfg.command = sub->get_name();
            if (sub == sample) code = cmd_sample(cfg);
            if (sub == scaling) code = cmd_scaling(cfg);
            if (sub == verify) code = cmd_verify(cfg);
            if (sub == towers) code = cmd_towers(cfg);
            if (sub == lower) code = cmd_lowerbound(cfg);
            if (sub == route) code = cmd_route(cfg);
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const SizeLimitExceeded& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << '\n';
        return kUsage;
    } catch (const LemmaViolation& e) {
        std::cerr << "invariant failure: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvariant;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cerr << "elapsed " << secs << " s\n";
    return code;
}
