#include <algorithm>
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sever/baselines.hpp"
#include "sever/csv_io.hpp"
#include "sever/experiment.hpp"
#include "sever/preprocess.hpp"
#include "sever/synthetic.hpp"

using namespace sever;
namespace fs = std::filesystem;

namespace {

SweepConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sever_test_harness_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("synthetic regression") {
    SyntheticConfig sc;
    sc.noise = 0.0;
    sc.n_train = 50;
    sc.dim = 4;
    sc.seed = 1;
    const auto task = gen_regression(sc);
    CHECK(norm2(task.w_star) == doctest::Approx(1.0));
    for (std::size_t i = 0; i < 50; ++i) {
        const auto s = task.train.sample(i);
        CHECK(s.y == doctest::Approx(dot(s.x, task.w_star)));
    }
    CHECK(gen_regression(sc).train == task.train);

    SyntheticConfig desk;
    desk.seed = 2;
    const auto d = gen_regression(desk);
    CHECK(d.train.size() == 1000);
    CHECK(d.test.size() == 200);
    const auto learner = ridge_learner(0.01);
    CHECK(test_error(learner.model, learner(d.train).w, d.test) <= 0.02);
}

TEST_CASE("synthetic classification balance") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticConfig sc;
        sc.seed = seed;
        const auto task = gen_classification(sc);
        CHECK(task.train.is_binary());
        const auto counts = task.train.class_counts();
        CHECK(std::abs(static_cast<double>(counts.positive) / 1000.0 - 0.5) <= 0.05);
    }
    SyntheticConfig sc;
    sc.noise = 0.0;
    const auto task = gen_classification(sc);
    for (std::size_t i = 0; i < task.train.size(); ++i) {
        const auto s = task.train.sample(i);
        CHECK(s.y == (dot(s.x, task.w_star) >= 0 ? 1.0 : -1.0));
    }
}

TEST_CASE("compute_p") {
    CHECK(compute_p(500, 500, 0.02, 2).p == doctest::Approx(0.02));
    CHECK(compute_p(100, 50, 0.03, 2).p == doctest::Approx(0.045));
    const auto capped = compute_p(1000, 10, 0.05, 2);
    CHECK(capped.capped);
    CHECK(capped.p == kMaxPFraction);
    CHECK(!compute_p(100, 50, 0.03, 2).capped);
    CHECK_THROWS_AS(compute_p(0, 5, 0.1, 1), Error);
    CHECK_THROWS_AS(compute_p(5, 5, 0.1, 0), Error);
}

TEST_CASE("robust centering") {
    SyntheticConfig sc;
    sc.seed = 3;
    const auto task = gen_regression(sc);
    const auto cs = robust_center_scale(task.train, task.test, 0.1, false);
    for (double c : cs.center) CHECK(std::abs(c) < 0.1);
    for (double s : cs.scale) CHECK(s == 1.0);
    CHECK(cs.test.sample(0).x[0] == doctest::Approx(task.test.sample(0).x[0] - cs.center[0]));

    Dataset constant(Matrix::from_rows({{1.0, 2.0}, {1.0, -1.0}, {1.0, 0.5}}), Vec{0, 0, 0});
    const auto cc = robust_center_scale(constant, constant, 0.0, true);
    CHECK(cc.scale[0] == 1e-12);
    for (std::size_t i = 0; i < 3; ++i) CHECK(cc.train.sample(i).x[0] == 0.0);
    // Scaling uses training statistics only.
    Dataset wide_test(Matrix::from_rows({{100.0, 100.0}}), Vec{0});
    const auto a = robust_center_scale(constant, wide_test, 0.0, true);
    const auto b = robust_center_scale(constant, constant, 0.0, true);
    CHECK(a.scale == b.scale);
    CHECK(a.center == b.center);
}

TEST_CASE("dataset CSV") {
    SUBCASE("handwritten file") {
        std::istringstream in("1,2,3\n-4.5,6e-1,1\n\n");
        const auto d = read_dataset_csv(in);
        CHECK(d.size() == 2);
        CHECK(d.dim() == 2);
        CHECK(d.sample(1).x[1] == doctest::Approx(0.6));
        CHECK(d.sample(1).y == 1.0);
        std::ostringstream out;
        write_dataset_csv(out, d);
        std::istringstream again(out.str());
        CHECK(read_dataset_csv(again) == d);
    }
    SUBCASE("errors carry line numbers") {
        auto err = [](const std::string& text) {
            std::istringstream in(text);
            try {
                read_dataset_csv(in);
            } catch (const ParseError& e) {
                return std::string(e.what());
            }
            return std::string("no error");
        };
        CHECK(err("") == "no rows");
        CHECK(err("1,2\n1,2,3\n") == "line 2: expected 2 cells, found 3");
        CHECK(err("1,2\n3,x\n") == "line 2: non-numeric cell 'x'");
        CHECK(err("1,2\n3\n").find("line 2: missing label column") == 0);
    }
    SUBCASE("1000-row bitwise round trip through a file") {
        std::mt19937_64 rng(4);
        std::normal_distribution<double> normal;
        Matrix x(1000, 5);
        Vec y(1000);
        for (std::size_t i = 0; i < 1000; ++i) {
            for (std::size_t k = 0; k < 5; ++k) x(i, k) = normal(rng) * std::exp(10 * normal(rng));
            y[i] = normal(rng);
        }
        const Dataset d(std::move(x), std::move(y));
        const auto path = scratch("csv") / "data.csv";
        save_csv(d, path);
        CHECK(load_csv(path) == d);
        CHECK_THROWS_AS(load_csv(path.parent_path() / "missing.csv"), Error);
    }
}

TEST_CASE("seeded train/test split") {
    Matrix x(50, 1);
    Vec y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        x(i, 0) = static_cast<double>(i);
        y[i] = static_cast<double>(i);
    }
    const Dataset d(std::move(x), std::move(y));
    const auto a = split_dataset(d, 0.2, 9);
    CHECK(a.train.size() == 40);
    CHECK(a.test.size() == 10);
    std::vector<double> all(a.train.responses().begin(), a.train.responses().end());
    all.insert(all.end(), a.test.responses().begin(), a.test.responses().end());
    std::sort(all.begin(), all.end());
    CHECK(all == d.responses());
    CHECK(split_dataset(d, 0.2, 9).test == a.test);
    CHECK_FALSE(split_dataset(d, 0.2, 10).test == a.test);
    CHECK(split_dataset(d, 0.001, 1).test.size() == 1);
    CHECK(split_dataset(d, 0.999, 1).train.size() == 1);
    CHECK_THROWS_AS(split_dataset(d, 0.0, 1), Error);
    CHECK_THROWS_AS(split_dataset(d.subset(std::vector<std::size_t>{0}), 0.5, 1), Error);
}

TEST_CASE("provenance and scores CSV") {
    const auto dir = scratch("prov");
    Provenance p;
    p.is_outlier = {0, 1, 1, 0};
    save_provenance(p, dir / "p.csv");
    CHECK(load_provenance(dir / "p.csv").is_outlier == p.is_outlier);
    {
        std::ofstream bad(dir / "bad.csv");
        bad << "id,is_outlier\n0,0\n2,1\n";
    }
    CHECK_THROWS_WITH(load_provenance(dir / "bad.csv"), doctest::Contains("line 3"));

    ScoreReport r;
    r.indices = {3, 1};
    r.scores = {0.5, 2.0};
    std::ostringstream out;
    write_scores_header(out);
    write_scores(out, 2, r, &p);
    CHECK(out.str() == "round,id,score,is_outlier\n2,3,0.5,0\n2,1,2,1\n");
}

TEST_CASE("sweep config parsing") {
    const auto cfg = parse(R"(
# comment
[experiment]
task = classification
n_train = 300   # trailing comment
trials = 5
[attack]
method = label-flip
eps = 0.01, 0.02
center_along = 1, 2
[defense]
names = sever, loss, ransac-oracle
p = balanced
rounds = 2
per_class = true
[learner]
name = svm
lambda = 0.05
)");
    CHECK(cfg.task == TaskKind::classification);
    CHECK(cfg.data.n_train == 300);
    CHECK(cfg.trials == 5);
    CHECK(cfg.attack == AttackKind::label_flip_cluster);
    CHECK(cfg.eps == std::vector<double>{0.01, 0.02});
    CHECK(cfg.center_along == std::vector<double>{1, 2});
    CHECK(cfg.defenses == std::vector<std::string>{"sever", "loss", "ransac-oracle"});
    CHECK(cfg.p_rule == PRule::class_balanced);
    CHECK(cfg.per_class);
    CHECK(cfg.learner == "svm");
    CHECK(cfg.lambda == 0.05);

    CHECK_THROWS_WITH(parse("[attack]\nepsilon = 0.1\n"), doctest::Contains("attack.epsilon"));
    CHECK_THROWS_WITH(parse("[plot]\n"), doctest::Contains("[plot]"));
    CHECK_THROWS_WITH(parse("eps = 0.1\n"), doctest::Contains("line 1"));
    CHECK_THROWS_WITH(parse("[attack]\neps 0.1\n"), doctest::Contains("line 2"));
    CHECK_THROWS_WITH(parse("[attack]\neps = abc\n"), doctest::Contains("attack.eps"));
    CHECK_THROWS_WITH(parse("[defense]\nnames = magic\n"), doctest::Contains("magic"));
    CHECK_THROWS_WITH(parse("[experiment]\ntrials = 0\n"), doctest::Contains("trials"));
    CHECK_THROWS_WITH(parse("[learner]\nname = forest\n"), doctest::Contains("learner.name"));
    CHECK_THROWS_AS(load_sweep_config("/nonexistent/sweep.conf"), Error);

    const auto split = parse("[experiment]\ndata_csv = all.csv\ntest_fraction = 0.3\nsplit_seed = 12\n");
    CHECK(split.data_csv == fs::path("all.csv"));
    CHECK(split.test_fraction == 0.3);
    CHECK(split.split_seed == 12);
    CHECK_THROWS_WITH(parse("[experiment]\ntest_fraction = 1.5\n"), doctest::Contains("test_fraction"));
    CHECK_THROWS_WITH(parse("[experiment]\ndata_csv = a.csv\ntrain_csv = b.csv\ntest_csv = c.csv\n"),
                      doctest::Contains("data_csv"));
}

TEST_CASE("median of trials") {
    CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median_of({4.0, 1.0}) == 2.5);
    CHECK(std::isnan(median_of({})));
}

TEST_CASE("clean single-cell sweep equals the clean fit") {
    const auto cfg = parse(R"(
[experiment]
n_train = 200
n_test = 100
d = 5
trials = 3
seed = 4
[attack]
eps = 0
[defense]
names = noDefense
)");
    const auto result = run_sweep(cfg);
    REQUIRE(result.records.size() == 3);
    for (const auto& r : result.records) {
        CHECK(r.attack == "none");
        CHECK(r.removed_good + r.removed_bad == 0);
    }
    std::vector<double> errs;
    for (const auto& r : result.records) errs.push_back(r.test_error);
    CHECK(result.median(0.0, "none", "noDefense") == median_of(errs));
    CHECK(result.worst(0.0, "noDefense").worst_median_test_error == median_of(errs));
    CHECK_THROWS_AS(result.median(0.5, "none", "noDefense"), Error);
}

TEST_CASE("sweep bookkeeping, determinism and files") {
    auto cfg = parse(R"(
[experiment]
n_train = 200
n_test = 100
d = 5
trials = 2
seed = 8
center = true
[attack]
eps = 0.1
alpha = 1, 3
[defense]
names = uncorrupted, sever, gradient
rounds = 2
)");
    const auto a = run_sweep(cfg);
    CHECK(a.records.size() == 2 * 2 * 3);
    for (const auto& r : a.records) {
        CHECK(r.error.empty());
        if (r.defense == "sever") {
            // p = eps / 2 over 2 rounds of the 220-row corrupted set.
            CHECK(r.removed_good + r.removed_bad == top_p_count(0.05, 220) + top_p_count(0.05, 220 - 11));
        }
    }
    cfg.threads = 4;
    std::ostringstream x, y;
    write_results_csv(x, a.records);
    write_results_csv(y, run_sweep(cfg).records);
    CHECK(x.str() == y.str());

    const auto dir = scratch("sweep");
    save_sweep(a, dir);
    CHECK(fs::exists(dir / "results.csv"));
    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(fs::exists(dir / "worst_case.csv"));
    CHECK(!fs::exists(dir / "errors.csv"));
}

TEST_CASE("per-cell failures become error records") {
    const auto cfg = parse(R"(
[experiment]
n_train = 20
n_test = 10
d = 2
trials = 1
[attack]
eps = 0.3
[defense]
names = noDefense, sever
p = 0.6
rounds = 3
)");
    const auto result = run_sweep(cfg);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].error.empty());
    CHECK(!result.records[1].error.empty());
    CHECK(std::isnan(result.records[1].test_error));
    const auto dir = scratch("errors");
    save_sweep(result, dir);
    CHECK(fs::exists(dir / "errors.csv"));
}
