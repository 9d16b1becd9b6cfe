#include "tgirg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "tgirg/diameter.hpp"
#include "tgirg/lowerbound.hpp"
#include "tgirg/parallel.hpp"
#include "tgirg/regions.hpp"
#include "tgirg/router.hpp"
#include "tgirg/sampler.hpp"
#include "tgirg/tessellation.hpp"

#ifndef TGIRG_BUILD_ID
#define TGIRG_BUILD_ID "unknown"
#endif

namespace tgirg {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

template <class T>
std::string joined(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += num(static_cast<double>(xs[i]));
    }
    return out;
}

std::string params_cells(const ModelParams& p) {
    return std::to_string(p.d) + ',' + num(p.tau) + ',' + num(p.lambda) + ',' + num(p.n) + ',' + std::to_string(p.seed);
}

constexpr const char* kParamsHeader = "d,tau,lambda,n,seed";

std::string csv_text(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::vector<std::pair<VertexId, VertexId>> sample_pairs(const GirgGraph& g, int count, std::uint64_t seed) {
    const auto comps = components(g.graph);
    std::vector<VertexId> members;
    for (VertexId v = 0; v < g.size(); ++v)
        if (comps.count() && comps.label[v] == comps.largest) members.push_back(v);
    std::vector<std::pair<VertexId, VertexId>> out;
    if (members.size() < 2) return out;
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    while (static_cast<int>(out.size()) < count) {
        const VertexId u = members[pick(rng)], v = members[pick(rng)];
        if (u != v) out.emplace_back(u, v);
    }
    return out;
}

}  // namespace

std::string build_id() { return TGIRG_BUILD_ID; }

void ExperimentConfig::validate() const {
    if (n.empty() || tau.empty() || lambda.empty() || d.empty()) throw InvalidInput("parameter ranges must be nonempty");
    if (seeds < 1) throw InvalidInput("seeds must be at least 1");
    if (!(d0_target > 0.0)) throw InvalidInput("d0 target must be positive");
    if (pairs < 0) throw InvalidInput("pair count must be nonnegative");
    if (c1_prime < 0.0) throw InvalidInput("probe constant must be nonnegative");
    for (const auto& t : expand_trials(*this)) t.params.validate();
}

std::string ExperimentConfig::comment_line() const {
    std::ostringstream os;
    os << "# command=" << command << " d=" << joined(d) << " tau=" << joined(tau) << " lambda=" << joined(lambda)
       << " n=" << joined(n) << " seed=" << seed << " seeds=" << seeds << " d0=" << num(d0_target)
       << " p=" << num(edge_prob) << " cutoff=" << towers.cutoff << " eps=" << num(towers.eps)
       << " c3=" << num(towers.c3) << " pairs=" << pairs << " c1prime=" << num(c1_prime) << " build=" << build_id();
    return os.str();
}

std::vector<Trial> expand_trials(const ExperimentConfig& cfg) {
    std::vector<Trial> out;
    for (int d : cfg.d)
        for (double tau : cfg.tau)
            for (double lambda : cfg.lambda)
                for (double n : cfg.n)
                    for (int k = 0; k < cfg.seeds; ++k) {
                        ModelParams p;
                        p.d = d;
                        p.tau = tau;
                        p.lambda = lambda;
                        p.n = n;
                        p.d0_target = std::min(cfg.d0_target, 0.5);
                        p.edge_prob = cfg.edge_prob;
                        p.seed = cfg.seed + static_cast<std::uint64_t>(k);
                        out.push_back({p, k});
                    }
    return out;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidInput("fit needs matching x and y");
    const std::size_t n = x.size();
    if (n < 2) throw InsufficientData("fit needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw InsufficientData("fit needs at least two distinct x values");
    LinearFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    f.flat = std::abs(f.slope) <= 1e-9 * std::max(1.0, std::abs(my));
    return f;
}

LinearFit fit_scaling(const std::vector<ScalingRow>& rows, bool per_n_mean) {
    std::vector<double> x, y;
    std::map<double, std::pair<double, int>> by_n;
    for (const auto& r : rows)
        if (r.ok) {
            x.push_back(std::log2(r.params.n));
            y.push_back(static_cast<double>(r.diameter));
            by_n[x.back()].first += y.back();
            ++by_n[x.back()].second;
        }
    if (per_n_mean) {
        x.clear();
        y.clear();
        for (const auto& [lg, acc] : by_n) {
            x.push_back(lg);
            y.push_back(acc.first / acc.second);
        }
    }
    return fit_linear(x, y);
}

ScalingReport run_scaling(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::set<double> distinct(cfg.n.begin(), cfg.n.end());
    if (distinct.size() < 4) throw InvalidInput("scaling needs at least 4 distinct values of n");
    if (cfg.seeds < 3) throw InvalidInput("scaling needs at least 3 seeds per point");
    const auto trials = expand_trials(cfg);
    ScalingReport rep;
    rep.rows.resize(trials.size());
    parallel_for(trials.size(), [&](std::size_t i) {
        ScalingRow& row = rep.rows[i];
        row.params = trials[i].params;
        try {
            const GirgGraph g = sample_girg(row.params);
            const DiameterResult res = ifub_diameter(g.graph);
            row.vertices = g.size();
            if (!res.components.empty()) {
                row.largest_component = res.components[res.largest].size;
                row.diameter = res.largest_diameter();
            }
            row.ratio = row.diameter / std::log2(row.params.n);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    });
    rep.fit = fit_scaling(rep.rows);
    rep.fit_runs = fit_scaling(rep.rows, false);
    return rep;
}

void write_scaling_csv(std::ostream& out, const ExperimentConfig& cfg, const ScalingReport& rep) {
    out << cfg.comment_line() << '\n'
        << kParamsHeader << ",status,vertices,largest_comp_size,diameter,diameter_over_log2n\n";
    for (const auto& r : rep.rows)
        out << params_cells(r.params) << ',' << (r.ok ? "ok" : "failed:" + csv_text(r.error)) << ',' << r.vertices
            << ',' << r.largest_component << ',' << r.diameter << ',' << num(r.ratio) << '\n';
    out << "# fit slope=" << num(rep.fit.slope) << " intercept=" << num(rep.fit.intercept) << " r2=" << num(rep.fit.r2)
        << " points=" << rep.fit.points << (rep.fit.flat ? " flat" : "") << " r2_runs=" << num(rep.fit_runs.r2)
        << '\n';
}

std::vector<SuiteResult> run_verify(const ExperimentConfig& cfg) {
    cfg.validate();
    const ModelParams params = expand_trials(cfg).front().params;
    const bool exact = cfg.edge_prob >= 1.0;
    std::vector<SuiteResult> suites;

    const GirgGraph g = sample_girg(params);
    const Tessellation tess = Tessellation::build(params, cfg.d0_target);

    {
        SuiteResult s;
        s.name = "crossing_anchor";
        s.hard = exact;
        const CrossingSurvey survey = survey_crossings(tess, g, 20000);
        s.checked = survey.instances;
        s.failures = survey.failures + survey.shadow_breaks;
        s.passed = s.failures == 0;
        s.detail = "edges=" + std::to_string(survey.edges) + " shadow_breaks=" + std::to_string(survey.shadow_breaks);
        if (!survey.first_failure.empty()) s.detail += " first=" + survey.first_failure;
        if (!exact) s.detail += " counting mode (edge_prob < 1)";
        suites.push_back(s);
    }
    {
        SuiteResult s;
        s.name = "boundary_connectivity";
        s.hard = true;
        const int d = std::min(params.d, 3);
        const Tessellation small(d, d == 1 ? 4 : 3, 1.0, 0);
        Rng rng(params.seed + 11);
        for (int trial = 0; trial < 200; ++trial) {
            const auto c_set = random_gplus_connected_set(small, 1 + trial % 12, rng);
            std::vector<BoxIndex> outside;
            for (BoxIndex b = 0; b < small.size(); ++b)
                if (!std::binary_search(c_set.begin(), c_set.end(), b)) outside.push_back(b);
            if (outside.empty()) continue;
            const BoxIndex x = outside[std::uniform_int_distribution<std::size_t>(0, outside.size() - 1)(rng)];
            ++s.checked;
            if (!verify_boundary_connected(small, c_set, x)) {
                if (!s.failures) s.detail = "first=" + small.format(x);
                ++s.failures;
            }
        }
        s.passed = s.failures == 0;
        suites.push_back(s);
    }
    {
        SuiteResult s;
        s.name = "gamma_chordality";
        s.hard = true;
        const int d = std::min(params.d, 3);
        for (int rho0 = 1; rho0 <= 3; ++rho0) {
            const Tessellation small(d, rho0, 1.0, 0);
            for (const auto& cycle : gamma_generators(small)) {
                ++s.checked;
                if (!check_chordal_in_gplus(small, cycle)) ++s.failures;
            }
        }
        s.passed = s.failures == 0;
        suites.push_back(s);
    }
    {
        SuiteResult s;
        s.name = "cycle_space";
        s.hard = true;
        for (auto [d, rho0] : {std::pair{1, 3}, std::pair{2, 2}}) {
            ++s.checked;
            if (!cycle_space_generation_check(Tessellation(d, rho0, 1.0, 0))) ++s.failures;
        }
        s.passed = s.failures == 0;
        suites.push_back(s);
    }

    const Router router(tess, g);
    const auto pairs = sample_pairs(g, cfg.pairs, params.seed);
    {
        SuiteResult s;
        s.name = "region_size";
        s.hard = false;
        std::size_t max_w = 0;
        for (const auto& [u, v] : pairs) {
            const Region r = router.regions().compute(tess.box_of(g.vertices[u]), tess.box_of(g.vertices[v]), false);
            max_w = std::max(max_w, r.w_set.size());
            ++s.checked;
        }
        s.detail = "max_w=" + std::to_string(max_w) + " max_w_over_log2n=" + num(max_w / std::log2(params.n));
        suites.push_back(s);
    }
    {
        SuiteResult s;
        s.name = "confined_walk";
        s.hard = exact;
        std::vector<std::string> problems(pairs.size());
        std::vector<double> stretch(pairs.size(), 0.0);
        parallel_for(pairs.size(), [&](std::size_t i) {
            try {
                const ConfinedWalk w = router.construct_confined_walk(pairs[i].first, pairs[i].second);
                const WalkValidation val = router.validate(w);
                if (!val.ok) problems[i] = val.problem;
                stretch[i] = static_cast<double>(w.length()) / std::max<std::size_t>(1, w.region_size);
            } catch (const LemmaViolation& e) {
                problems[i] = e.what();
            }
        });
        s.checked = pairs.size();
        for (const auto& p : problems)
            if (!p.empty()) {
                if (!s.failures) s.detail = "first=" + p + ' ';
                ++s.failures;
            }
        s.passed = s.failures == 0;
        const double worst = stretch.empty() ? 0.0 : *std::max_element(stretch.begin(), stretch.end());
        s.detail += "max_length_over_region=" + num(worst);
        if (!exact) s.detail += " counting mode (edge_prob < 1)";
        suites.push_back(s);
    }
    return suites;
}

void write_verify_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SuiteResult>& suites) {
    out << cfg.comment_line() << '\n' << "suite,hard,status,checked,failures,detail\n";
    for (const auto& s : suites)
        out << s.name << ',' << (s.hard ? "hard" : "soft") << ',' << (s.passed ? "pass" : "fail") << ',' << s.checked
            << ',' << s.failures << ',' << csv_text(s.detail) << '\n';
}

std::vector<TowerLevelRow> run_towers(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto trials = expand_trials(cfg);
    std::vector<std::vector<TowerLevelRow>> per(trials.size());
    parallel_for(trials.size(), [&](std::size_t i) {
        const ModelParams& p = trials[i].params;
        const GirgGraph g = sample_girg(p);
        const Tessellation tess = Tessellation::build(p, cfg.d0_target);
        for (int cutoff = 0; cutoff <= cfg.towers.cutoff && cutoff < tess.rho0(); ++cutoff) {
            TowerOptions opt = cfg.towers;
            opt.cutoff = cutoff;
            const TowerEvaluator ev(tess, g, opt);
            TowerLevelRow row;
            row.params = p;
            row.cutoff = cutoff;
            for (const auto& r : ev.all_reports()) {
                ++row.towers;
                row.active += r.active();
                row.cond1 += r.high_boxes_active;
                row.cond2 += r.single_high_component;
                row.cond3 += r.small_stray_components;
            }
            per[i].push_back(row);
        }
    });
    std::vector<TowerLevelRow> out;
    for (auto& rows : per) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

void write_towers_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<TowerLevelRow>& rows) {
    out << cfg.comment_line() << '\n'
        << kParamsHeader << ",cutoff,towers,active,cond1,cond2,cond3,active_rate\n";
    for (const auto& r : rows)
        out << params_cells(r.params) << ',' << r.cutoff << ',' << r.towers << ',' << r.active << ',' << r.cond1 << ','
            << r.cond2 << ',' << r.cond3 << ',' << num(r.towers ? static_cast<double>(r.active) / r.towers : 0.0)
            << '\n';
}

std::vector<LowerBoundRow> run_lowerbound(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto trials = expand_trials(cfg);
    std::vector<LowerBoundRow> rows(trials.size());
    parallel_for(trials.size(), [&](std::size_t i) {
        LowerBoundRow& row = rows[i];
        row.params = trials[i].params;
        const GirgGraph g = sample_girg(row.params);
        if (const auto low = scan_long_low_weight_component(g)) {
            row.component_size = low->size;
            row.component_diameter = low->diameter;
        }
        const int d = row.params.d;
        const double c1 = cfg.c1_prime > 0.0 ? cfg.c1_prime : std::pow(50.0, d) / std::log(row.params.n);
        const std::vector<double> center(d, g.side() / 2);
        try {
            const WitnessReport w = plant_witness_probe(g, center, c1);
            row.probe_success = w.success;
            row.probe_grid = w.M;
            row.probe_diameter = w.component_diameter;
            row.probe_note = w.first_violation;
        } catch (const InvalidInput& e) {
            row.probe_note = e.what();
        }
    });
    return rows;
}

void write_lowerbound_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<LowerBoundRow>& rows) {
    out << cfg.comment_line() << '\n'
        << kParamsHeader << ",low_comp_size,low_comp_diameter,probe_success,probe_grid,probe_diameter,probe_note\n";
    for (const auto& r : rows)
        out << params_cells(r.params) << ',' << r.component_size << ',' << r.component_diameter << ','
            << (r.probe_success ? 1 : 0) << ',' << r.probe_grid << ',' << r.probe_diameter << ','
            << csv_text(r.probe_note) << '\n';
}

std::vector<RouteRow> run_route(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<RouteRow> out;
    for (const auto& trial : expand_trials(cfg)) {
        const ModelParams& p = trial.params;
        const GirgGraph g = sample_girg(p);
        const Tessellation tess = Tessellation::build(p, cfg.d0_target);
        const Router router(tess, g);
        const auto pairs = sample_pairs(g, cfg.pairs, p.seed);
        std::vector<RouteRow> rows(pairs.size());
        parallel_for(pairs.size(), [&](std::size_t i) {
            RouteRow& row = rows[i];
            row.params = p;
            row.u = pairs[i].first;
            row.v = pairs[i].second;
            try {
                const ConfinedWalk w = router.construct_confined_walk(row.u, row.v);
                const WalkValidation val = router.validate(w);
                row.shortest = w.shortest;
                row.walk_length = w.length();
                row.max_hop = val.max_hop;
                row.w_size = w.w_size;
                row.s_size = w.s_size;
                row.excursions = w.excursions;
                row.ok = val.ok;
                row.problem = val.problem;
            } catch (const LemmaViolation& e) {
                row.ok = false;
                row.problem = e.what();
            }
        });
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

void write_route_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<RouteRow>& rows) {
    out << cfg.comment_line() << '\n'
        << kParamsHeader << ",u,v,shortest,walk_length,max_hop,w_size,s_size,excursions,status,problem\n";
    for (const auto& r : rows)
        out << params_cells(r.params) << ',' << r.u << ',' << r.v << ',' << r.shortest << ',' << r.walk_length << ','
            << r.max_hop << ',' << r.w_size << ',' << r.s_size << ',' << r.excursions << ','
            << (r.ok ? "ok" : "fail") << ',' << csv_text(r.problem) << '\n';
}

std::string route_summary_json(const std::vector<RouteRow>& rows) {
    std::size_t failures = 0, max_len = 0;
    Distance max_hop = 0;
    double max_ratio = 0.0;
    for (const auto& r : rows) {
        failures += !r.ok;
        max_hop = std::max(max_hop, r.max_hop);
        max_len = std::max(max_len, r.walk_length);
        const std::size_t region = r.w_size + r.s_size;
        if (region) max_ratio = std::max(max_ratio, static_cast<double>(r.walk_length) / region);
    }
    nlohmann::ordered_json j;
    j["pairs"] = rows.size();
    j["failures"] = failures;
    j["max_hop"] = max_hop;
    j["max_walk_length"] = max_len;
    j["max_length_over_region"] = max_ratio;
    return j.dump();
}

}  // namespace tgirg
