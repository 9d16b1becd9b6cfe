#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tgirg/geometry.hpp"
#include "tgirg/towers.hpp"

namespace tgirg {

/// git-describe style identifier baked in at configure time.
std::string build_id();

struct ExperimentConfig {
    std::string command;
    std::vector<double> n{1024.0};
    std::vector<double> tau{2.5};
    std::vector<double> lambda{1.0};
    std::vector<int> d{2};
    std::uint64_t seed = 1;
    int seeds = 1;
    std::string output;
    double d0_target = 0.25;
    double edge_prob = 1.0;
    TowerOptions towers;
    int pairs = 200;
    double c1_prime = 0.0;  ///< probe volume constant; 0 picks the smallest usable one

    /// Throws InvalidInput on empty ranges or seeds < 1.
    void validate() const;
    /// Single `# key=value ...` line ending in the build id.
    std::string comment_line() const;
};

/// One parameter point with seed: the cartesian product of the ranges, times seeds.
struct Trial {
    ModelParams params;
    int seed_index = 0;
};

/// Ordered by d, tau, lambda, n, then seed index. Seeds are seed + trial index within a point.
std::vector<Trial> expand_trials(const ExperimentConfig& cfg);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
    bool flat = false;  ///< |slope| below 1e-9 times the mean response
};

/// Least squares y = slope x + intercept. Throws InsufficientData for fewer than two
/// points or identical x values. R^2 is 1 when y is constant.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingRow {
    ModelParams params;
    bool ok = true;
    std::size_t vertices = 0;
    std::size_t largest_component = 0;
    Distance diameter = 0;
    double ratio = 0.0;  ///< diameter / log2 n
    std::string error;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    LinearFit fit;       ///< over the per-n mean diameter
    LinearFit fit_runs;  ///< over every ok row
};

/// Samples every trial, measures the largest component diameter and fits it against log2 n.
/// Throws InvalidInput unless there are >= 4 distinct n values and >= 3 seeds.
ScalingReport run_scaling(const ExperimentConfig& cfg);
/// Fit of diameter against log2 n over the rows marked ok: per-n means when
/// per_n_mean is set, otherwise one point per row.
LinearFit fit_scaling(const std::vector<ScalingRow>& rows, bool per_n_mean = true);
void write_scaling_csv(std::ostream& out, const ExperimentConfig& cfg, const ScalingReport& rep);

struct SuiteResult {
    std::string name;
    bool hard = true;  ///< failure of a hard suite is an invariant failure
    bool passed = true;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string detail;
};

/// Crossing anchors, boundary connectivity, chordality, cycle space, region size and
/// confined walks on the first trial of cfg. With edge_prob < 1 the anchor and walk
/// suites only count failures.
std::vector<SuiteResult> run_verify(const ExperimentConfig& cfg);
void write_verify_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SuiteResult>& suites);

struct TowerLevelRow {
    ModelParams params;
    int cutoff = 0;
    std::size_t towers = 0;
    std::size_t active = 0;
    std::size_t cond1 = 0;
    std::size_t cond2 = 0;
    std::size_t cond3 = 0;
};

/// Activity counts per trial for every cutoff from 0 to the configured one.
std::vector<TowerLevelRow> run_towers(const ExperimentConfig& cfg);
void write_towers_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<TowerLevelRow>& rows);

struct LowerBoundRow {
    ModelParams params;
    std::size_t component_size = 0;
    Distance component_diameter = 0;
    bool probe_success = false;
    int probe_grid = 0;
    Distance probe_diameter = 0;
    std::string probe_note;
};

std::vector<LowerBoundRow> run_lowerbound(const ExperimentConfig& cfg);
void write_lowerbound_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<LowerBoundRow>& rows);

struct RouteRow {
    ModelParams params;
    VertexId u = 0;
    VertexId v = 0;
    Distance shortest = 0;
    std::size_t walk_length = 0;
    Distance max_hop = 0;
    std::size_t w_size = 0;
    std::size_t s_size = 0;
    std::size_t excursions = 0;
    bool ok = true;
    std::string problem;
};

/// Random connected pairs of the largest component, cfg.pairs per trial. Pair selection
/// uses an RNG seeded from the trial seed.
std::vector<RouteRow> run_route(const ExperimentConfig& cfg);
void write_route_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<RouteRow>& rows);

/// JSON summary of a route table: pair count, failures, max hop, max walk length / |W u S|.
std::string route_summary_json(const std::vector<RouteRow>& rows);

}  // namespace tgirg
