#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tgirg/experiments.hpp"

using namespace tgirg;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string file;
};

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / ("tgirg_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

struct ScratchCleanup {
    ~ScratchCleanup() {
        std::error_code ec;
        fs::remove_all(fs::temp_directory_path() / ("tgirg_cli_test_" + std::to_string(::getpid())), ec);
    }
} cleanup;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the CLI with `args`, writing its table to `name` inside the scratch directory.
Run cli(const std::string& args, const std::string& name = "out.csv") {
    const fs::path dir = scratch();
    const fs::path file = dir / name, stdout_file = dir / "stdout.txt";
    if (!name.empty()) fs::remove(file);
    const std::string cmd = std::string(TGIRG_CLI_PATH) + " " + args + (name.empty() ? "" : " -o " + file.string()) +
                            " > " + stdout_file.string() + " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(stdout_file);
    if (!name.empty() && fs::exists(file)) r.file = slurp(file);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

ScalingRow row(double n, Distance diameter) {
    ScalingRow r;
    r.params.n = n;
    r.diameter = diameter;
    return r;
}

}  // namespace

TEST_CASE("linear fit") {
    auto f = fit_linear({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(f.points == 4);
    CHECK_FALSE(f.flat);

    f = fit_linear({1, 2, 3, 4}, {5, 5, 5, 5});
    CHECK(std::abs(f.slope) < 1e-12);
    CHECK(f.flat);
    CHECK(f.r2 == 1.0);

    f = fit_linear({0, 1, 2, 3}, {0, 2, 1, 3});
    CHECK(f.slope == doctest::Approx(0.8));
    CHECK(f.r2 == doctest::Approx(0.64));

    CHECK_THROWS_AS(fit_linear({1}, {1}), InsufficientData);
    CHECK_THROWS_AS(fit_linear({2, 2, 2}, {1, 2, 3}), InsufficientData);
}

TEST_CASE("scaling fit over rows") {
    std::vector<ScalingRow> rows;
    for (double n : {1024.0, 2048.0, 4096.0, 8192.0})
        for (int s = 0; s < 3; ++s) rows.push_back(row(n, 7));
    CHECK(fit_scaling(rows).flat);

    rows.clear();
    for (int k = 10; k <= 13; ++k) {
        rows.push_back(row(std::exp2(k), static_cast<Distance>(k)));
        rows.push_back(row(std::exp2(k), static_cast<Distance>(k + 2)));
    }
    rows.push_back(row(1024.0, 100));
    rows.back().ok = false;
    const auto means = fit_scaling(rows);
    CHECK(means.points == 4);
    CHECK(means.slope == doctest::Approx(1.0));
    CHECK(means.intercept == doctest::Approx(1.0));
    CHECK(means.r2 == doctest::Approx(1.0));
    const auto runs = fit_scaling(rows, false);
    CHECK(runs.points == 8);
    CHECK(runs.slope == doctest::Approx(1.0));
    CHECK(runs.r2 < 1.0);
}

TEST_CASE("config and trials") {
    ExperimentConfig cfg;
    cfg.command = "scaling";
    cfg.n = {512, 256};
    cfg.tau = {2.5, 2.8};
    cfg.seeds = 2;
    cfg.seed = 10;
    const auto trials = expand_trials(cfg);
    REQUIRE(trials.size() == 8);
    CHECK(trials[0].params.tau == 2.5);
    CHECK(trials[0].params.n == 512);
    CHECK(trials[0].params.seed == 10);
    CHECK(trials[1].params.seed == 11);
    CHECK(trials[1].seed_index == 1);
    CHECK(trials[2].params.n == 256);
    CHECK(trials[4].params.tau == 2.8);

    const std::string line = cfg.comment_line();
    CHECK(line.rfind("# command=scaling ", 0) == 0);
    CHECK(line.find("n=512,256") != std::string::npos);
    CHECK(line.find("build=" + build_id()) != std::string::npos);

    ExperimentConfig bad = cfg;
    bad.seeds = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = cfg;
    bad.n.clear();
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("scaling refuses small designs") {
    ExperimentConfig cfg;
    cfg.command = "scaling";
    cfg.n = {1024};
    cfg.seeds = 3;
    CHECK_THROWS_AS(run_scaling(cfg), InvalidInput);
    cfg.n = {256, 512, 1024};
    CHECK_THROWS_AS(run_scaling(cfg), InvalidInput);
    cfg.n = {256, 512, 1024, 2048};
    cfg.seeds = 2;
    CHECK_THROWS_AS(run_scaling(cfg), InvalidInput);
    cfg.seeds = 3;
    const auto rep = run_scaling(cfg);
    CHECK(rep.rows.size() == 12);
    CHECK(rep.fit.points == 4);
    for (const auto& r : rep.rows) {
        CHECK(r.ok);
        CHECK(r.ratio == doctest::Approx(r.diameter / std::log2(r.params.n)));
        CHECK(r.largest_component <= r.vertices);
    }
}

TEST_CASE("cli exit codes") {
    CHECK(cli("sample --n 0").code == 1);
    CHECK(cli("sample --tau 1.5").code == 1);
    CHECK(cli("bogus", "").code == 1);
    CHECK(cli("sample --n 256 -o /nonexistent_dir/x/g.girg", "").code == 2);
    CHECK(cli("scaling --n 1024 --seeds 3").code == 1);

    const Run bad_d0 = cli("verify --n 829.44 --d0 0.9");
    CHECK(bad_d0.code == 3);
    CHECK(nlohmann::json::parse(bad_d0.out)["crossing_anchor"] == "fail");

    const Run thinned = cli("verify --p 0.5");
    CHECK(thinned.code == 0);
    CHECK(nlohmann::json::parse(thinned.out)["crossing_anchor"] == "warn");
}

TEST_CASE("cli default verify passes") {
    const Run r = cli("verify");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const auto& [suite, status] : j.items()) CHECK(status == "pass");
    const auto rows = lines(r.file);
    REQUIRE(rows.size() == 8);
    CHECK(rows[1] == "suite,hard,status,checked,failures,detail");
}

TEST_CASE("cli sample output") {
    const Run a = cli("sample --d 2 --tau 2.5 --lambda 1 --n 4096 --seed 7", "g.girg");
    const Run b = cli("sample --d 2 --tau 2.5 --lambda 1 --n 4096 --seed 7", "g.girg");
    CHECK(a.code == 0);
    CHECK(a.file == b.file);
    CHECK(a.out.rfind("vertices ", 0) == 0);
    std::istringstream in(a.file);
    const GirgGraph g = read_girg(in);
    CHECK(g.params.d == 2);
    CHECK(g.params.n == 4096);
    CHECK(g.params.tau == 2.5);
    CHECK(g.params.seed == 7);
    CHECK(a.out == "vertices " + std::to_string(g.size()) + " edges " + std::to_string(g.graph.num_edges()) + "\n");
}

TEST_CASE("cli tables are deterministic and headed") {
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"scaling --n 256,512,1024,2048 --seeds 3", "d,tau,lambda,n,seed,status,vertices,largest_comp_size,diameter,diameter_over_log2n"},
        {"towers --n 4096 --cutoff 2 --seeds 2", "d,tau,lambda,n,seed,cutoff,towers,active,cond1,cond2,cond3,active_rate"},
        {"lowerbound --n 4096 --lambda 0.25 --seeds 2",
         "d,tau,lambda,n,seed,low_comp_size,low_comp_diameter,probe_success,probe_grid,probe_diameter,probe_note"},
        {"route --n 1024 --pairs 30",
         "d,tau,lambda,n,seed,u,v,shortest,walk_length,max_hop,w_size,s_size,excursions,status,problem"},
    };
    for (const auto& [args, header] : commands) {
        CAPTURE(args);
        const Run a = cli(args), b = cli(args);
        CHECK(a.code == 0);
        CHECK(a.file == b.file);
        CHECK(a.out == b.out);
        const auto rows = lines(a.file);
        REQUIRE(rows.size() >= 3);
        CHECK(rows[0].rfind("# command=" + args.substr(0, args.find(' ')) + " ", 0) == 0);
        CHECK(rows[0].find("build=") != std::string::npos);
        CHECK(rows[1] == header);
    }
    const auto route = nlohmann::json::parse(cli("route --n 1024 --pairs 30").out);
    CHECK(route["pairs"] == 30);
    CHECK(route["failures"] == 0);
    CHECK(route["max_hop"].get<int>() <= 3);
}
