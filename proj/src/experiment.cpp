#include "sever/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "sever/csv_io.hpp"
#include "sever/preprocess.hpp"
#include "sever/seed.hpp"
#include "sever/sever.hpp"

namespace sever {

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw Error("config: key '" + key + "' expects a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw Error("config: key '" + key + "' expects a nonnegative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) {
        out.push_back(to_double(key, item));
    }
    return out;
}

const std::vector<std::string>& known_defenses() {
    static const std::vector<std::string> names = {
        "sever", "sever-theoretical", "noDefense", "none", "l2", "loss", "gradient",
        "gradientCentered", "ransac", "ransac-oracle", "uncorrupted"};
    return names;
}

void apply_key(SweepConfig& cfg, const std::string& section, const std::string& key,
               const std::string& v) {
    const std::string full = section + "." + key;
    if (section == "experiment") {
        if (key == "task") {
            if (v == "regression") cfg.task = TaskKind::regression;
            else if (v == "classification") cfg.task = TaskKind::classification;
            else throw Error("config: key '" + full + "' expects regression|classification");
        } else if (key == "n_train") cfg.data.n_train = to_count(full, v);
        else if (key == "n_test") cfg.data.n_test = to_count(full, v);
        else if (key == "d") cfg.data.dim = to_count(full, v);
        else if (key == "noise") cfg.data.noise = to_double(full, v);
        else if (key == "trials") cfg.trials = to_count(full, v);
        else if (key == "seed") cfg.seed = to_count(full, v);
        else if (key == "center") cfg.center = to_bool(full, v);
        else if (key == "scale") cfg.scale = to_bool(full, v);
        else if (key == "threads") cfg.threads = std::max<std::uint64_t>(1, to_count(full, v));
        else if (key == "train_csv") cfg.train_csv = v;
        else if (key == "test_csv") cfg.test_csv = v;
        else if (key == "data_csv") cfg.data_csv = v;
        else if (key == "test_fraction") cfg.test_fraction = to_double(full, v);
        else if (key == "split_seed") cfg.split_seed = to_count(full, v);
        else throw Error("config: unknown key '" + full + "'");
    } else if (section == "attack") {
        if (key == "method") cfg.attack = parse_attack_kind(v);
        else if (key == "eps") cfg.eps = to_doubles(full, v);
        else if (key == "alpha") cfg.alpha = to_doubles(full, v);
        else if (key == "beta") cfg.beta = v == "alpha" ? std::vector<double>{} : to_doubles(full, v);
        else if (key == "noise_scale") cfg.noise_scale = to_doubles(full, v);
        else if (key == "center_along") cfg.center_along = to_doubles(full, v);
        else if (key == "center_ortho") cfg.center_ortho = to_doubles(full, v);
        else throw Error("config: unknown key '" + full + "'");
    } else if (section == "defense") {
        if (key == "names") {
            cfg.defenses = split_list(v);
            for (const auto& d : cfg.defenses) {
                const auto& known = known_defenses();
                if (std::find(known.begin(), known.end(), d) == known.end()) {
                    throw Error("config: key '" + full + "' names unknown defense '" + d + "'");
                }
            }
        } else if (key == "p") {
            if (v == "half-eps") cfg.p_rule = PRule::half_eps;
            else if (v == "balanced") cfg.p_rule = PRule::class_balanced;
            else {
                cfg.p_rule = PRule::fixed;
                cfg.p_fraction = to_double(full, v);
            }
        } else if (key == "rounds") cfg.rounds = to_count(full, v);
        else if (key == "per_class") cfg.per_class = to_bool(full, v);
        else if (key == "sigma") cfg.sigma = to_double(full, v);
        else if (key == "threshold_mult") cfg.threshold_mult = to_double(full, v);
        else if (key == "ransac_subsample") cfg.ransac.subsample_size = to_count(full, v);
        else if (key == "ransac_rounds") cfg.ransac.num_rounds = to_count(full, v);
        else throw Error("config: unknown key '" + full + "'");
    } else if (section == "learner") {
        if (key == "name") {
            if (v != "ridge" && v != "svm" && v != "logistic") {
                throw Error("config: key '" + full + "' expects ridge|svm|logistic");
            }
            cfg.learner = v;
        } else if (key == "lambda") cfg.lambda = to_double(full, v);
        else if (key == "step_size") cfg.learner_cfg.step_size = to_double(full, v);
        else if (key == "max_epochs") cfg.learner_cfg.max_epochs = to_count(full, v);
        else if (key == "gamma_target") cfg.learner_cfg.gamma_target = to_double(full, v);
        else if (key == "radius") cfg.learner_cfg.domain_radius = to_double(full, v);
        else throw Error("config: unknown key '" + full + "'");
    } else {
        throw Error("config: unknown section '[" + section + "]'");
    }
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error("config: line " + std::to_string(line_no) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "attack" && section != "defense" &&
                section != "learner") {
                throw Error("config: unknown section '[" + section + "]'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("config: line " + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw Error("config: line " + std::to_string(line_no) + ": key outside any section");
        }
        apply_key(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    if (cfg.trials == 0) {
        throw Error("config: key 'experiment.trials' must be >= 1");
    }
    if (cfg.eps.empty()) {
        throw Error("config: key 'attack.eps' needs at least one value");
    }
    if (cfg.train_csv.has_value() != cfg.test_csv.has_value()) {
        throw Error("config: keys 'experiment.train_csv' and 'experiment.test_csv' go together");
    }
    if (cfg.data_csv && cfg.train_csv) {
        throw Error("config: key 'experiment.data_csv' excludes 'experiment.train_csv'");
    }
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw Error("config: key 'experiment.test_fraction' must lie in (0, 1)");
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config '" + path.string() + "'");
    }
    return parse_sweep_config(in);
}

Learner make_learner(const std::string& name, double lambda, const LearnerConfig& cfg) {
    if (name == "ridge") {
        return ridge_learner(lambda);
    }
    if (name == "svm") {
        return subgradient_learner("svm", LossModel{LossKind::hinge, lambda}, cfg);
    }
    if (name == "logistic") {
        return subgradient_learner("logistic", LossModel{LossKind::logistic, lambda}, cfg);
    }
    throw Error("unknown learner '" + name + "'");
}

// ---------------------------------------------------------------------------
// Sweep execution

double median_of(std::vector<double> values) {
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct AttackSetting {
    std::string label;
    double alpha = 1.0;
    double beta = 1.0;
    std::optional<double> noise;
    double along = 1.0;
    double ortho = 0.0;
};

std::vector<AttackSetting> expand_attacks(const SweepConfig& cfg) {
    std::vector<AttackSetting> out;
    std::vector<std::optional<double>> noises;
    if (cfg.noise_scale.empty()) {
        noises.push_back(std::nullopt);
    } else {
        noises.assign(cfg.noise_scale.begin(), cfg.noise_scale.end());
    }
    auto noise_label = [&](const std::optional<double>& n) {
        return n ? ":noise=" + short_number(*n) : std::string();
    };
    for (const auto& noise : noises) {
        if (cfg.attack == AttackKind::ridge_alpha_beta) {
            for (double a : cfg.alpha) {
                const std::vector<double> betas = cfg.beta.empty() ? std::vector<double>{a} : cfg.beta;
                for (double b : betas) {
                    AttackSetting s;
                    s.alpha = a;
                    s.beta = b;
                    s.noise = noise;
                    s.label = "ridge-alpha-beta:alpha=" + short_number(a) + ":beta=" +
                              short_number(b) + noise_label(noise);
                    out.push_back(s);
                }
            }
        } else {
            for (double a : cfg.center_along) {
                for (double o : cfg.center_ortho) {
                    AttackSetting s;
                    s.along = a;
                    s.ortho = o;
                    s.noise = noise;
                    s.label = "label-flip:along=" + short_number(a) + ":ortho=" + short_number(o) +
                              noise_label(noise);
                    out.push_back(s);
                }
            }
        }
    }
    return out;
}

struct TrialData {
    Dataset train;
    Dataset test;
    /// label-flip geometry
    Vec minority_mean;
    Vec ortho_unit;
    double minority_label = 1.0;
    /// Clean-data gradient spread for the theoretical variant.
    double sigma_estimate = 0.0;
};

TrialData prepare_trial(const SweepConfig& cfg, std::size_t trial, const Dataset* user_train,
                        const Dataset* user_test) {
    TrialData td;
    if (user_train != nullptr) {
        td.train = *user_train;
        td.test = *user_test;
    } else {
        SyntheticConfig sc = cfg.data;
        sc.seed = derive_seed(cfg.seed, {1, trial});
        SyntheticTask task =
            cfg.task == TaskKind::regression ? gen_regression(sc) : gen_classification(sc);
        td.train = std::move(task.train);
        td.test = std::move(task.test);
    }
    if (cfg.attack == AttackKind::label_flip_cluster && td.train.is_binary()) {
        const auto counts = td.train.class_counts();
        td.minority_label = counts.negative < counts.positive ? -1.0 : 1.0;
        td.minority_mean.assign(td.train.dim(), 0.0);
        std::size_t m = 0;
        for (std::size_t i = 0; i < td.train.size(); ++i) {
            if (td.train.responses()[i] == td.minority_label) {
                axpy(1.0, td.train.sample(i).x, td.minority_mean);
                ++m;
            }
        }
        for (auto& v : td.minority_mean) {
            v /= static_cast<double>(std::max<std::size_t>(m, 1));
        }
        // Unit vector orthogonal to the minority mean.
        std::mt19937_64 rng(derive_seed(cfg.seed, {3, trial}));
        std::normal_distribution<double> normal;
        td.ortho_unit.assign(td.train.dim(), 0.0);
        const double mn2 = squared_norm(td.minority_mean);
        double norm = 0.0;
        while (norm < 1e-9) {
            for (auto& v : td.ortho_unit) {
                v = normal(rng);
            }
            if (mn2 > 0.0) {
                axpy(-dot(td.ortho_unit, td.minority_mean) / mn2, td.minority_mean, td.ortho_unit);
            }
            norm = norm2(td.ortho_unit);
        }
        for (auto& v : td.ortho_unit) {
            v /= norm;
        }
    }
    return td;
}

struct Cell {
    std::size_t eps_index = 0;
    std::size_t attack_index = 0;
    std::size_t trial = 0;
};

std::size_t count_removed(const SeverOutcome& o, const Provenance& prov, bool bad) {
    std::size_t n = 0;
    for (const auto& round : o.removed_per_round) {
        for (auto id : round) {
            const bool is_bad = id < prov.is_outlier.size() && prov.is_outlier[id] != 0;
            n += is_bad == bad ? 1 : 0;
        }
    }
    return n;
}

std::vector<ExperimentRecord> run_cell(const SweepConfig& cfg, const Learner& learner,
                                       const std::vector<AttackSetting>& attacks,
                                       const std::vector<TrialData>& trials, const Cell& cell) {
    const double eps = cfg.eps[cell.eps_index];
    const TrialData& td = trials[cell.trial];
    const std::uint64_t cell_seed =
        derive_seed(cfg.seed, {2, cell.eps_index, cell.attack_index, cell.trial});

    CorruptedDataset corrupted;
    std::string attack_label = "none";
    if (eps > 0.0) {
        const AttackSetting& setting = attacks[cell.attack_index];
        attack_label = setting.label;
        AttackSpec spec;
        spec.eps = eps;
        spec.kind = cfg.attack;
        spec.alpha = setting.alpha;
        spec.beta = setting.beta;
        spec.noise_scale = setting.noise;
        spec.seed = cell_seed;
        if (cfg.attack == AttackKind::label_flip_cluster) {
            Vec center = scaled(td.minority_mean, setting.along);
            axpy(setting.ortho, td.ortho_unit, center);
            spec.cluster_center = std::move(center);
            spec.injected_label = -td.minority_label;
        }
        corrupted = apply_attack(td.train, spec);
    } else {
        corrupted.data = td.train;
        corrupted.provenance.is_outlier.assign(td.train.size(), 0);
    }

    Dataset train = corrupted.data;
    Dataset test = td.test;
    Dataset clean_train = td.train;
    Dataset clean_test = td.test;
    if (cfg.center) {
        auto cs = robust_center_scale(train, test, eps, cfg.scale, derive_seed(cell_seed, {4}));
        train = std::move(cs.train);
        test = std::move(cs.test);
        auto clean_cs = robust_center_scale(clean_train, td.test, 0.0, cfg.scale,
                                            derive_seed(cell_seed, {5}));
        clean_train = std::move(clean_cs.train);
        clean_test = std::move(clean_cs.test);
    }

    double p = cfg.p_fraction;
    if (cfg.p_rule == PRule::half_eps) {
        p = eps / 2.0;
    } else if (cfg.p_rule == PRule::class_balanced) {
        const auto counts = train.class_counts();
        const auto pf = compute_p(std::max<std::size_t>(counts.positive, 1),
                                  std::max<std::size_t>(counts.negative, 1), eps, cfg.rounds);
        if (pf.capped) {
            std::cerr << "warning: eps=" << eps << ": class-balanced p capped at " << kMaxPFraction
                      << '\n';
        }
        p = pf.p;
    }

    SeverConfig sc;
    sc.variant = SeverVariant::practical;
    sc.p_fraction = p;
    sc.num_rounds = cfg.rounds;
    sc.per_class = cfg.per_class;
    sc.threshold_mult = cfg.threshold_mult;
    sc.seed = derive_seed(cell_seed, {6});

    std::vector<ExperimentRecord> out;
    for (const auto& name : cfg.defenses) {
        ExperimentRecord rec;
        rec.eps = eps;
        rec.attack = attack_label;
        rec.defense = name == "none" ? "noDefense" : name;
        rec.learner = learner.name;
        rec.trial = cell.trial;
        try {
            SeverOutcome o;
            const Dataset* eval_test = &test;
            if (name == "uncorrupted") {
                FitResult fit = learner(clean_train);
                o.w = std::move(fit.w);
                o.learner_calls = 1;
                eval_test = &clean_test;
            } else if (name == "noDefense" || name == "none" || p <= 0.0) {
                o = run_baseline(BaselineKind::no_defense, train, learner, sc);
            } else if (name == "sever") {
                o = run_sever(train, learner, sc);
            } else if (name == "sever-theoretical") {
                SeverConfig tc = sc;
                tc.variant = SeverVariant::theoretical;
                tc.sigma = cfg.sigma;
                if (tc.sigma <= 0.0) {
                    const FitResult clean_fit = learner(clean_train);
                    tc.sigma = gradient_spectral_scores(learner.model, clean_fit.w, clean_train,
                                                        clean_train.active_indices(), tc.seed)
                                   .sigma_hat;
                }
                o = run_sever(train, learner, tc);
            } else if (name == "ransac" || name == "ransac-oracle") {
                RansacConfig rc = cfg.ransac;
                rc.seed = derive_seed(cell_seed, {7});
                rc.selection = name == "ransac-oracle" ? RansacSelection::oracle_test
                                                       : RansacSelection::median_train_loss;
                o = run_ransac(train, learner, rc, &test);
            } else {
                o = run_baseline(parse_baseline_kind(name), train, learner, sc);
            }
            rec.test_error = test_error(learner.model, o.w, *eval_test);
            rec.rounds = std::max<std::size_t>(o.rounds_run, 1);
            rec.removed_good = count_removed(o, corrupted.provenance, false);
            rec.removed_bad = count_removed(o, corrupted.provenance, true);
        } catch (const std::exception& e) {
            rec.test_error = std::numeric_limits<double>::quiet_NaN();
            rec.error = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    const Learner learner = make_learner(cfg.learner, cfg.lambda, cfg.learner_cfg);
    const auto attacks = expand_attacks(cfg);
    if (attacks.empty()) {
        throw Error("config: attack grid is empty");
    }

    std::optional<Dataset> user_train;
    std::optional<Dataset> user_test;
    if (cfg.train_csv) {
        user_train = load_csv(*cfg.train_csv);
        user_test = load_csv(*cfg.test_csv);
    } else if (cfg.data_csv) {
        auto split = split_dataset(load_csv(*cfg.data_csv), cfg.test_fraction, cfg.split_seed);
        user_train = std::move(split.train);
        user_test = std::move(split.test);
    }
    std::vector<TrialData> trials;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        trials.push_back(prepare_trial(cfg, t, user_train ? &*user_train : nullptr,
                                       user_test ? &*user_test : nullptr));
    }

    std::vector<Cell> cells;
    for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
        // eps = 0 has no attack; one cell per trial.
        const std::size_t n_attacks = cfg.eps[e] > 0.0 ? attacks.size() : 1;
        for (std::size_t a = 0; a < n_attacks; ++a) {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                cells.push_back({e, a, t});
            }
        }
    }

    std::vector<std::vector<ExperimentRecord>> per_cell(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            per_cell[i] = run_cell(cfg, learner, attacks, trials, cells[i]);
        }
    };
    const std::size_t n_threads = std::min(cfg.threads, std::max<std::size_t>(cells.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    SweepResult result;
    for (auto& recs : per_cell) {
        for (auto& r : recs) {
            result.records.push_back(std::move(r));
        }
    }

    // Median over trials per (eps, attack, defense, learner), in first-seen order.
    std::vector<std::vector<double>> values;
    for (const auto& r : result.records) {
        auto it = std::find_if(result.summary.begin(), result.summary.end(), [&](const SummaryRow& s) {
            return s.eps == r.eps && s.attack == r.attack && s.defense == r.defense &&
                   s.learner == r.learner;
        });
        std::size_t idx = 0;
        if (it == result.summary.end()) {
            result.summary.push_back({r.eps, r.attack, r.defense, r.learner, 0.0, 0});
            values.emplace_back();
            idx = result.summary.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - result.summary.begin());
        }
        if (r.error.empty()) {
            values[idx].push_back(r.test_error);
        }
    }
    for (std::size_t i = 0; i < result.summary.size(); ++i) {
        result.summary[i].trials = values[i].size();
        result.summary[i].median_test_error = median_of(values[i]);
    }

    for (const auto& s : result.summary) {
        auto it = std::find_if(result.worst_case.begin(), result.worst_case.end(),
                               [&](const WorstCaseRow& w) {
                                   return w.eps == s.eps && w.defense == s.defense &&
                                          w.learner == s.learner;
                               });
        if (it == result.worst_case.end()) {
            result.worst_case.push_back({s.eps, s.defense, s.learner, s.attack, s.median_test_error});
        } else if (s.median_test_error > it->worst_median_test_error ||
                   (std::isnan(it->worst_median_test_error) && !std::isnan(s.median_test_error))) {
            it->worst_attack = s.attack;
            it->worst_median_test_error = s.median_test_error;
        }
    }
    return result;
}

double SweepResult::median(double eps, const std::string& attack, const std::string& defense) const {
    for (const auto& s : summary) {
        if (s.eps == eps && s.attack == attack && s.defense == defense) {
            return s.median_test_error;
        }
    }
    throw Error("sweep: no summary row for eps=" + short_number(eps) + " attack=" + attack +
                " defense=" + defense);
}

const WorstCaseRow& SweepResult::worst(double eps, const std::string& defense) const {
    for (const auto& w : worst_case) {
        if (w.eps == eps && w.defense == defense) {
            return w;
        }
    }
    throw Error("sweep: no worst-case row for eps=" + short_number(eps) + " defense=" + defense);
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << "eps,attack,defense,learner,trial,test_error,rounds,removed_good,removed_bad\n";
    for (const auto& r : records) {
        out << format_double(r.eps) << ',' << r.attack << ',' << r.defense << ',' << r.learner << ','
            << r.trial << ',' << format_double(r.test_error) << ',' << r.rounds << ','
            << r.removed_good << ',' << r.removed_bad << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "eps,attack,defense,learner,median_test_error,trials\n";
    for (const auto& s : rows) {
        out << format_double(s.eps) << ',' << s.attack << ',' << s.defense << ',' << s.learner << ','
            << format_double(s.median_test_error) << ',' << s.trials << '\n';
    }
}

void write_worst_case_csv(std::ostream& out, const std::vector<WorstCaseRow>& rows) {
    out << "eps,defense,learner,worst_attack,worst_median_test_error\n";
    for (const auto& w : rows) {
        out << format_double(w.eps) << ',' << w.defense << ',' << w.learner << ',' << w.worst_attack
            << ',' << format_double(w.worst_median_test_error) << '\n';
    }
}

void save_sweep(const SweepResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto open = [&](const char* name) {
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) {
            throw Error("cannot open '" + (out_dir / name).string() + "' for writing");
        }
        return f;
    };
    {
        auto f = open("results.csv");
        write_results_csv(f, result.records);
    }
    {
        auto f = open("summary.csv");
        write_summary_csv(f, result.summary);
    }
    {
        auto f = open("worst_case.csv");
        write_worst_case_csv(f, result.worst_case);
    }
    const bool any_error = std::any_of(result.records.begin(), result.records.end(),
                                       [](const ExperimentRecord& r) { return !r.error.empty(); });
    if (any_error) {
        auto f = open("errors.csv");
        f << "eps,attack,defense,trial,message\n";
        for (const auto& r : result.records) {
            if (!r.error.empty()) {
                std::string msg = r.error;
                std::replace(msg.begin(), msg.end(), ',', ';');
                f << format_double(r.eps) << ',' << r.attack << ',' << r.defense << ',' << r.trial
                  << ',' << msg << '\n';
            }
        }
    }
}

}  // namespace sever
