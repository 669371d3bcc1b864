// Command-line front end: generate data, attack it, run a defense, or run a
// whole epsilon sweep. Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sever/attacks.hpp"
#include "sever/baselines.hpp"
#include "sever/csv_io.hpp"
#include "sever/experiment.hpp"
#include "sever/sever.hpp"
#include "sever/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

fs::path sibling(const fs::path& p, const std::string& suffix) {
    return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

struct GenArgs {
    std::string task = "regression";
    std::size_t n = 1000;
    std::size_t n_test = 200;
    std::size_t d = 20;
    double noise = 0.1;
    std::uint64_t seed = 0;
    std::string out;
    std::string test_out;
    std::string wstar_out;
};

struct AttackArgs {
    std::string in;
    std::string method = "ridge-alpha-beta";
    double eps = 0.1;
    double alpha = 1.0;
    double beta = 1.0;
    std::optional<double> noise_scale;
    std::uint64_t seed = 0;
    std::string out;
    std::string provenance_out;
};

struct RunArgs {
    std::string train;
    std::string test;
    std::string defense = "sever";
    std::string learner = "ridge";
    std::string variant = "practical";
    double lambda = 0.01;
    double p = 0.05;
    std::size_t rounds = 4;
    double sigma = 0.0;
    bool per_class = false;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::string provenance;
    std::string scores_out;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    sever::SyntheticConfig sc;
    sc.n_train = a.n;
    sc.n_test = a.n_test;
    sc.dim = a.d;
    sc.noise = a.noise;
    sc.seed = a.seed;
    const auto task = a.task == "regression" ? sever::gen_regression(sc) : sever::gen_classification(sc);
    sever::save_csv(task.train, a.out);
    sever::save_csv(task.test, a.test_out.empty() ? sibling(a.out, "_test") : fs::path(a.test_out));
    if (!a.wstar_out.empty()) {
        std::ofstream f(a.wstar_out);
        for (std::size_t k = 0; k < task.w_star.size(); ++k) {
            f << (k ? "," : "") << sever::format_double(task.w_star[k]);
        }
        f << '\n';
    }
    return 0;
}

int cmd_attack(const AttackArgs& a) {
    const auto clean = sever::load_csv(a.in);
    sever::AttackSpec spec;
    spec.eps = a.eps;
    spec.kind = sever::parse_attack_kind(a.method);
    spec.alpha = a.alpha;
    spec.beta = a.beta;
    spec.noise_scale = a.noise_scale;
    spec.seed = a.seed;
    const auto corrupted = sever::apply_attack(clean, spec);
    sever::save_csv(corrupted.data, a.out);
    sever::save_provenance(corrupted.provenance, a.provenance_out.empty()
                                                     ? sibling(a.out, ".provenance")
                                                     : fs::path(a.provenance_out));
    return 0;
}

int cmd_run(const RunArgs& a) {
    const auto train = sever::load_csv(a.train);
    const auto test = sever::load_csv(a.test);
    sever::Provenance prov;
    if (!a.provenance.empty()) {
        prov = sever::load_provenance(a.provenance);
        if (prov.is_outlier.size() != train.size()) {
            throw sever::Error("provenance has " + std::to_string(prov.is_outlier.size()) +
                               " rows but the training set has " + std::to_string(train.size()));
        }
    }
    const auto learner = sever::make_learner(a.learner, a.lambda, sever::LearnerConfig{});

    sever::SeverConfig cfg;
    cfg.variant = a.variant == "theoretical" ? sever::SeverVariant::theoretical
                                             : sever::SeverVariant::practical;
    cfg.p_fraction = a.p;
    cfg.num_rounds = a.rounds;
    cfg.sigma = a.sigma;
    cfg.per_class = a.per_class;
    cfg.seed = a.seed;
    cfg.record_scores = !a.scores_out.empty();

    sever::SeverOutcome outcome;
    if (a.defense == "sever") {
        outcome = sever::run_sever(train, learner, cfg);
    } else if (a.defense == "ransac") {
        sever::RansacConfig rc;
        rc.seed = a.seed;
        outcome = sever::run_ransac(train, learner, rc, &test);
    } else {
        outcome = sever::run_baseline(sever::parse_baseline_kind(a.defense), train, learner, cfg);
    }
    if (!a.scores_out.empty()) {
        sever::save_scores(outcome.round_scores, prov.is_outlier.empty() ? nullptr : &prov,
                           a.scores_out);
    }

    sever::ExperimentRecord rec;
    rec.eps = a.eps;
    rec.attack = a.provenance.empty() ? "unknown" : "provenance";
    rec.defense = a.defense == "none" ? "noDefense" : a.defense;
    rec.learner = learner.name;
    rec.test_error = sever::test_error(learner.model, outcome.w, test);
    rec.rounds = outcome.rounds_run;
    for (const auto& round : outcome.removed_per_round) {
        for (auto id : round) {
            const bool bad = !prov.is_outlier.empty() && prov.is_outlier[id] != 0;
            ++(bad ? rec.removed_bad : rec.removed_good);
        }
    }
    if (a.out.empty()) {
        sever::write_results_csv(std::cout, {rec});
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) {
            throw sever::Error("cannot open '" + a.out + "' for writing");
        }
        sever::write_results_csv(f, {rec});
    }
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out_dir) {
    const auto cfg = sever::load_sweep_config(config);
    const auto result = sever::run_sweep(cfg);
    sever::save_sweep(result, out_dir);
    for (const auto& w : result.worst_case) {
        std::cout << "eps=" << w.eps << " defense=" << w.defense
                  << " worst_median_test_error=" << w.worst_median_test_error << " ("
                  << w.worst_attack << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust learning with gradient-based outlier filtering"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic train/test pair");
    gen_cmd->add_option("--task", gen.task)->check(CLI::IsMember({"regression", "classification"}));
    gen_cmd->add_option("--n", gen.n, "Training samples");
    gen_cmd->add_option("--n-test", gen.n_test, "Test samples");
    gen_cmd->add_option("--d", gen.d, "Dimension");
    gen_cmd->add_option("--noise", gen.noise);
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--out", gen.out, "Training CSV")->required();
    gen_cmd->add_option("--test-out", gen.test_out, "Test CSV (default <out>_test.csv)");
    gen_cmd->add_option("--wstar-out", gen.wstar_out, "Write the true parameters here");

    AttackArgs atk;
    auto* atk_cmd = app.add_subcommand("attack", "Append outliers to a clean dataset");
    atk_cmd->add_option("--in", atk.in)->required();
    atk_cmd->add_option("--method", atk.method)
        ->check(CLI::IsMember({"ridge-alpha-beta", "label-flip"}));
    atk_cmd->add_option("--eps", atk.eps);
    atk_cmd->add_option("--alpha", atk.alpha);
    atk_cmd->add_option("--beta", atk.beta);
    atk_cmd->add_option("--noise-scale", atk.noise_scale);
    atk_cmd->add_option("--seed", atk.seed);
    atk_cmd->add_option("--out", atk.out)->required();
    atk_cmd->add_option("--provenance-out", atk.provenance_out,
                        "Provenance CSV (default <out>.provenance.csv)");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run one defense and report its test error");
    run_cmd->add_option("--train", run.train)->required();
    run_cmd->add_option("--test", run.test)->required();
    run_cmd->add_option("--defense", run.defense)
        ->check(CLI::IsMember(
            {"sever", "l2", "loss", "gradient", "gradientCentered", "ransac", "none", "noDefense"}));
    run_cmd->add_option("--learner", run.learner)->check(CLI::IsMember({"ridge", "svm", "logistic"}));
    run_cmd->add_option("--variant", run.variant)->check(CLI::IsMember({"practical", "theoretical"}));
    run_cmd->add_option("--lambda", run.lambda);
    run_cmd->add_option("--p", run.p);
    run_cmd->add_option("--rounds", run.rounds);
    run_cmd->add_option("--sigma", run.sigma);
    run_cmd->add_flag("--per-class", run.per_class);
    run_cmd->add_option("--eps", run.eps, "Recorded in the output row");
    run_cmd->add_option("--seed", run.seed);
    run_cmd->add_option("--provenance", run.provenance, "Provenance CSV for removal counts");
    run_cmd->add_option("--scores-out", run.scores_out, "Per-round scores CSV");
    run_cmd->add_option("--out", run.out, "Results CSV (default stdout)");

    std::string config;
    std::string out_dir = "sweep_out";
    auto* sweep_cmd = app.add_subcommand("sweep", "Run an epsilon sweep from a config file");
    sweep_cmd->add_option("--config", config)->required();
    sweep_cmd->add_option("--out-dir", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen);
        if (*atk_cmd) return cmd_attack(atk);
        if (*run_cmd) return cmd_run(run);
        if (*sweep_cmd) return cmd_sweep(config, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
