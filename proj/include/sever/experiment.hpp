#pragma once

// Epsilon-sweep experiment runner: generate or load data, corrupt it, run
// every requested defense and record test errors.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sever/attacks.hpp"
#include "sever/baselines.hpp"
#include "sever/learners.hpp"
#include "sever/synthetic.hpp"

namespace sever {

enum class TaskKind { regression, classification };

enum class PRule {
    /// p_fraction as given.
    fixed,
    /// p = eps / 2.
    half_eps,
    /// compute_p on the corrupted training classes.
    class_balanced,
};

struct SweepConfig {
    // [experiment]
    TaskKind task = TaskKind::regression;
    SyntheticConfig data;
    /// User-supplied data instead of the synthetic generator.
    std::optional<std::filesystem::path> train_csv;
    std::optional<std::filesystem::path> test_csv;
    /// Single CSV split into train/test by split_dataset.
    std::optional<std::filesystem::path> data_csv;
    double test_fraction = 0.2;
    std::uint64_t split_seed = 0;
    std::size_t trials = 3;
    std::uint64_t seed = 1;
    bool center = false;
    bool scale = false;
    std::size_t threads = 1;

    // [attack]
    AttackKind attack = AttackKind::ridge_alpha_beta;
    std::vector<double> eps = {0.1};
    std::vector<double> alpha = {1.0};
    /// Empty means beta = alpha for every grid point.
    std::vector<double> beta;
    /// Empty means the attack's default noise.
    std::vector<double> noise_scale;
    /// label-flip: center = along * (smaller-class mean) + ortho * u, with u a
    /// random unit vector orthogonal to that mean.
    std::vector<double> center_along = {1.0};
    std::vector<double> center_ortho = {0.0};

    // [defense]
    std::vector<std::string> defenses = {"sever"};
    PRule p_rule = PRule::half_eps;
    double p_fraction = 0.05;
    std::size_t rounds = 4;
    bool per_class = false;
    /// 0 means estimate from clean data (theoretical variant only).
    double sigma = 0.0;
    double threshold_mult = 12.0;
    RansacConfig ransac;

    // [learner]
    std::string learner = "ridge";
    double lambda = 0.01;
    LearnerConfig learner_cfg;
};

/// Parses the key=value sweep format with [experiment], [attack], [defense]
/// and [learner] sections. '#' starts a comment; lists are comma separated.
/// Unknown sections or keys raise an error naming them.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::filesystem::path& path);

Learner make_learner(const std::string& name, double lambda, const LearnerConfig& cfg);

struct ExperimentRecord {
    double eps = 0.0;
    std::string attack;
    std::string defense;
    std::string learner;
    std::size_t trial = 0;
    double test_error = 0.0;
    std::size_t rounds = 0;
    std::size_t removed_good = 0;
    std::size_t removed_bad = 0;
    /// Empty on success.
    std::string error;
};

struct SummaryRow {
    double eps = 0.0;
    std::string attack;
    std::string defense;
    std::string learner;
    double median_test_error = 0.0;
    std::size_t trials = 0;
};

struct WorstCaseRow {
    double eps = 0.0;
    std::string defense;
    std::string learner;
    std::string worst_attack;
    double worst_median_test_error = 0.0;
};

struct SweepResult {
    std::vector<ExperimentRecord> records;
    std::vector<SummaryRow> summary;
    std::vector<WorstCaseRow> worst_case;

    /// Median test error of a (eps, attack, defense) cell; throws if absent.
    double median(double eps, const std::string& attack, const std::string& defense) const;
    const WorstCaseRow& worst(double eps, const std::string& defense) const;
};

/// Median of the values; the mean of the two middle values for even counts.
double median_of(std::vector<double> values);

SweepResult run_sweep(const SweepConfig& cfg);

/// Results CSV: eps,attack,defense,learner,trial,test_error,rounds,removed_good,removed_bad
void write_results_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_worst_case_csv(std::ostream& out, const std::vector<WorstCaseRow>& rows);

/// Writes results.csv, summary.csv, worst_case.csv and, when any cell failed,
/// errors.csv into out_dir.
void save_sweep(const SweepResult& result, const std::filesystem::path& out_dir);

}  // namespace sever
