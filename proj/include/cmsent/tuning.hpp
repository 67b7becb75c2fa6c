#pragma once

// Exhaustive grid search with shuffled k-fold cross-validation, scored by
// macro-F1 of decoded SVR predictions.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmsent/error.hpp"
#include "cmsent/eval.hpp"
#include "cmsent/io.hpp"
#include "cmsent/random.hpp"
#include "cmsent/svr.hpp"

namespace cmsent {

struct ParamGrid {
    std::vector<double> c_values;
    std::vector<double> gamma_values;
    std::vector<double> epsilon_values;
    std::vector<KernelType> kernels;
    // Non-grid settings (tol, cache size, ...) shared by every combination.
    SvrHyperParams base;

    static ParamGrid defaults() {
        return {{0.1, 1.0, 10.0, 100.0}, {0.01, 0.1, 1.0}, {0.05, 0.1, 0.2}, {KernelType::linear, KernelType::rbf}, {}};
    }

    void validate() const {
        if (c_values.empty()) throw ConfigError("grid: 'C' list is empty");
        if (gamma_values.empty()) throw ConfigError("grid: 'gamma' list is empty");
        if (epsilon_values.empty()) throw ConfigError("grid: 'epsilon' list is empty");
        if (kernels.empty()) throw ConfigError("grid: 'kernel' list is empty");
        for (double c : c_values)
            if (!(c > 0.0 && std::isfinite(c))) throw ConfigError("grid: 'C' values must be positive");
        for (double g : gamma_values)
            if (!(g > 0.0 && std::isfinite(g))) throw ConfigError("grid: 'gamma' values must be positive");
        for (double e : epsilon_values)
            if (!(e >= 0.0 && std::isfinite(e))) throw ConfigError("grid: 'epsilon' values must be non-negative");
    }
};

namespace detail {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace detail

// Order: kernel (linear, rbf), then C, epsilon, gamma ascending. Linear
// combinations take the smallest gamma as an inert placeholder, so they are
// not repeated per gamma value.
inline std::vector<SvrHyperParams> expand_grid(const ParamGrid& grid) {
    grid.validate();
    const auto kernels = detail::sorted_unique(grid.kernels);
    const auto cs = detail::sorted_unique(grid.c_values);
    const auto eps = detail::sorted_unique(grid.epsilon_values);
    const auto gammas = detail::sorted_unique(grid.gamma_values);
    std::vector<SvrHyperParams> combos;
    for (auto kernel : kernels)
        for (double c : cs)
            for (double e : eps) {
                const std::span<const double> gs =
                    kernel == KernelType::linear ? std::span<const double>(gammas).first(1) : std::span(gammas);
                for (double g : gs) {
                    auto p = grid.base;
                    p.kernel = kernel;
                    p.c = c;
                    p.epsilon = e;
                    p.gamma = g;
                    combos.push_back(p);
                }
            }
    return combos;
}

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Seeded shuffle of 0..n-1 cut into k contiguous test chunks; the first
// n % k chunks are one larger. Index lists are returned in ascending order.
inline std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold: k must be at least 2");
    if (k > n) throw DataError("k-fold: k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " samples");
    const auto order = seeded_permutation(n, seed);
    std::vector<std::size_t> fold_of(n);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        for (std::size_t s = 0; s < size; ++s) fold_of[order[pos++]] = f;
    }
    std::vector<Fold> folds(k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
    return folds;
}

struct CvRow {
    SvrHyperParams params;
    double mean_fit_time = 0.0;
    double std_fit_time = 0.0;
    double mean_score_time = 0.0;
    double std_score_time = 0.0;
    std::vector<double> split_test_score;
    std::vector<double> split_train_score;
    double mean_test_score = 0.0;
    double std_test_score = 0.0;
    double mean_train_score = 0.0;
    double std_train_score = 0.0;
    int rank_test_score = 0;
    // Folds whose fit threw; they score 0.
    std::size_t failed_folds = 0;
    std::string first_error;
};

struct GridSearchReport {
    std::vector<CvRow> rows;
    SvrHyperParams best_params;
    std::size_t best_index = 0;
    std::size_t n_folds = 0;
    std::uint64_t seed = 0;
};

template <KernelSample Sample>
struct GridSearchResult {
    GridSearchReport report;
    SvrModel<Sample> model;
};

namespace detail {

struct FoldOutcome {
    double test_score = 0.0;
    double train_score = 0.0;
    double fit_time = 0.0;
    double score_time = 0.0;
    bool failed = false;
    std::string error;
};

template <KernelSample Sample>
double score_subset(const SvrModel<Sample>& model, std::span<const Sample> x, std::span<const SentimentLabel> labels,
                    std::span<const std::size_t> idx) {
    std::vector<SentimentLabel> gold, pred;
    gold.reserve(idx.size());
    pred.reserve(idx.size());
    for (auto i : idx) {
        gold.push_back(labels[i]);
        pred.push_back(decode_label(predict(model, x[i])));
    }
    return macro_f1(gold, pred);
}

template <KernelSample Sample>
FoldOutcome run_fold(const SvrHyperParams& params, std::span<const Sample> x, std::span<const SentimentLabel> labels,
                     const Fold& fold) {
    using clock = std::chrono::steady_clock;
    FoldOutcome out;
    try {
        std::vector<Sample> xs;
        std::vector<double> ys;
        xs.reserve(fold.train.size());
        ys.reserve(fold.train.size());
        for (auto i : fold.train) {
            xs.push_back(x[i]);
            ys.push_back(encode_label(labels[i]));
        }
        const auto t0 = clock::now();
        const auto model = fit<Sample>(params, xs, ys);
        const auto t1 = clock::now();
        out.test_score = score_subset(model, x, labels, fold.test);
        const auto t2 = clock::now();
        out.train_score = score_subset(model, x, labels, fold.train);
        out.fit_time = std::chrono::duration<double>(t1 - t0).count();
        out.score_time = std::chrono::duration<double>(t2 - t1).count();
    } catch (const std::exception& e) {
        out = FoldOutcome{};
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

inline void mean_std(std::span<const double> v, double& mean, double& sd) {
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / static_cast<double>(v.size()));
}

inline CvRow aggregate(const SvrHyperParams& params, std::span<const FoldOutcome> folds) {
    CvRow row;
    row.params = params;
    std::vector<double> fit_t, score_t;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& o = folds[f];
        row.split_test_score.push_back(o.test_score);
        row.split_train_score.push_back(o.train_score);
        fit_t.push_back(o.fit_time);
        score_t.push_back(o.score_time);
        if (o.failed) {
            if (row.failed_folds == 0) row.first_error = "fold " + std::to_string(f) + ": " + o.error;
            ++row.failed_folds;
        }
    }
    mean_std(row.split_test_score, row.mean_test_score, row.std_test_score);
    mean_std(row.split_train_score, row.mean_train_score, row.std_train_score);
    mean_std(fit_t, row.mean_fit_time, row.std_fit_time);
    mean_std(score_t, row.mean_score_time, row.std_score_time);
    return row;
}

template <KernelSample Sample>
void validate_cv_inputs(std::span<const Sample> x, std::span<const SentimentLabel> labels, std::size_t k) {
    if (x.size() != labels.size()) throw DataError("cross-validation: sample and label counts differ");
    if (x.size() < k) throw DataError("cross-validation: fewer samples than folds");
}

// Runs task(t) for t in [0, n) on up to `workers` threads.
template <typename Task>
void parallel_for(std::size_t n, std::size_t workers, Task&& task) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t t = 0; t < n; ++t) task(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < n; t = next++) task(t);
        });
}

}  // namespace detail

template <KernelSample Sample>
CvRow cross_validate(const SvrHyperParams& params, std::span<const Sample> x, std::span<const SentimentLabel> labels,
                     std::size_t k, std::uint64_t seed) {
    params.validate();
    detail::validate_cv_inputs(x, labels, k);
    const auto folds = kfold_split(x.size(), k, seed);
    std::vector<detail::FoldOutcome> outcomes;
    for (const auto& fold : folds) outcomes.push_back(detail::run_fold(params, x, labels, fold));
    return detail::aggregate(params, outcomes);
}

// Ranks by mean_test_score descending; ties share the smaller rank and the
// earliest row in grid order is the best.
inline void assign_ranks(GridSearchReport& report) {
    auto& rows = report.rows;
    for (auto& r : rows) {
        r.rank_test_score = 1;
        for (const auto& other : rows)
            if (other.mean_test_score > r.mean_test_score) ++r.rank_test_score;
    }
    report.best_index = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].mean_test_score > rows[report.best_index].mean_test_score) report.best_index = i;
    if (!rows.empty()) report.best_params = rows[report.best_index].params;
}

template <KernelSample Sample>
GridSearchResult<Sample> grid_search(const ParamGrid& grid, std::span<const Sample> x,
                                     std::span<const SentimentLabel> labels, std::size_t k, std::uint64_t seed,
                                     std::size_t workers = 1) {
    const auto combos = expand_grid(grid);
    for (const auto& c : combos) c.validate();
    detail::validate_cv_inputs(x, labels, k);
    const auto folds = kfold_split(x.size(), k, seed);

    // (combo, fold) tasks land in fixed slots so the report does not depend
    // on scheduling.
    std::vector<detail::FoldOutcome> outcomes(combos.size() * k);
    detail::parallel_for(outcomes.size(), workers, [&](std::size_t t) {
        outcomes[t] = detail::run_fold(combos[t / k], x, labels, folds[t % k]);
    });

    GridSearchResult<Sample> result;
    auto& report = result.report;
    report.n_folds = k;
    report.seed = seed;
    for (std::size_t c = 0; c < combos.size(); ++c)
        report.rows.push_back(detail::aggregate(combos[c], std::span(outcomes).subspan(c * k, k)));
    assign_ranks(report);

    std::vector<double> y;
    y.reserve(labels.size());
    for (auto l : labels) y.push_back(encode_label(l));
    result.model = fit<Sample>(report.best_params, x, y);
    return result;
}

// ---------------------------------------------------------------------------
// Report output

inline std::string params_string(const SvrHyperParams& p) {
    std::string s = "{C=" + format_real(p.c) + ", epsilon=" + format_real(p.epsilon);
    if (p.kernel == KernelType::rbf) s += ", gamma=" + format_real(p.gamma);
    s += ", kernel=" + std::string(to_string(p.kernel)) + "}";
    return s;
}

inline std::vector<std::string> cv_columns(std::size_t k) {
    std::vector<std::string> cols{"mean_fit_time", "mean_score_time", "mean_test_score", "mean_train_score",
                                  "param_C",       "param_epsilon",   "param_gamma",     "param_kernel",
                                  "params",        "rank_test_score"};
    for (std::size_t f = 0; f < k; ++f) {
        cols.push_back("split" + std::to_string(f) + "_test_score");
        cols.push_back("split" + std::to_string(f) + "_train_score");
    }
    for (const char* c : {"std_fit_time", "std_score_time", "std_test_score", "std_train_score"}) cols.emplace_back(c);
    return cols;
}

// Tab-separated, one row per combination in grid order.
inline std::string format_cv_table(const GridSearchReport& report) {
    const auto cols = cv_columns(report.n_folds);
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "\t" : "") + cols[i];
    out += '\n';
    for (const auto& r : report.rows) {
        std::vector<std::string> cells{format_real(r.mean_fit_time),
                                       format_real(r.mean_score_time),
                                       format_real(r.mean_test_score),
                                       format_real(r.mean_train_score),
                                       format_real(r.params.c),
                                       format_real(r.params.epsilon),
                                       r.params.kernel == KernelType::rbf ? format_real(r.params.gamma) : "",
                                       std::string(to_string(r.params.kernel)),
                                       params_string(r.params),
                                       std::to_string(r.rank_test_score)};
        for (std::size_t f = 0; f < r.split_test_score.size(); ++f) {
            cells.push_back(format_real(r.split_test_score[f]));
            cells.push_back(format_real(r.split_train_score[f]));
        }
        for (double v : {r.std_fit_time, r.std_score_time, r.std_test_score, r.std_train_score})
            cells.push_back(format_real(v));
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "\t" : "") + cells[i];
        out += '\n';
    }
    return out;
}

inline nlohmann::json params_to_json(const SvrHyperParams& p) {
    return {{"C", p.c},           {"epsilon", p.epsilon},          {"gamma", p.gamma},
            {"kernel", std::string(to_string(p.kernel))},          {"tol", p.tol},
            {"cache_size", p.cache_size_mb}, {"coef0", p.coef0},   {"max_iter", p.max_iter},
            {"shrinking", p.shrinking}};
}

inline nlohmann::json report_to_json(const GridSearchReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json j;
        j["mean_fit_time"] = r.mean_fit_time;
        j["mean_score_time"] = r.mean_score_time;
        j["mean_test_score"] = r.mean_test_score;
        j["mean_train_score"] = r.mean_train_score;
        j["param_C"] = r.params.c;
        j["param_epsilon"] = r.params.epsilon;
        j["param_gamma"] = r.params.kernel == KernelType::rbf ? nlohmann::json(r.params.gamma) : nlohmann::json();
        j["param_kernel"] = std::string(to_string(r.params.kernel));
        j["params"] = params_to_json(r.params);
        j["rank_test_score"] = r.rank_test_score;
        for (std::size_t f = 0; f < r.split_test_score.size(); ++f) {
            j["split" + std::to_string(f) + "_test_score"] = r.split_test_score[f];
            j["split" + std::to_string(f) + "_train_score"] = r.split_train_score[f];
        }
        j["std_fit_time"] = r.std_fit_time;
        j["std_score_time"] = r.std_score_time;
        j["std_test_score"] = r.std_test_score;
        j["std_train_score"] = r.std_train_score;
        j["failed_folds"] = r.failed_folds;
        if (r.failed_folds) j["error"] = r.first_error;
        rows.push_back(std::move(j));
    }
    return {{"n_folds", report.n_folds},
            {"seed", report.seed},
            {"best_index", report.best_index},
            {"best_params", params_to_json(report.best_params)},
            {"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// Grid configuration file (JSON):
//   {"C": [...], "gamma": [...], "epsilon": [...], "kernel": ["linear", "rbf"],
//    "folds": 3, "seed": 42, "workers": 4}
// Missing lists fall back to ParamGrid::defaults().

struct GridConfig {
    ParamGrid grid = ParamGrid::defaults();
    std::optional<std::size_t> folds;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
};

namespace detail {

inline std::vector<double> real_list(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError("grid config: field '" + field + "' must be a list of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("grid config: field '" + field + "' must be a list of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

template <typename Int>
Int positive_int(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError("grid config: field '" + field + "' must be a non-negative integer");
    return j.get<Int>();
}

}  // namespace detail

inline GridConfig parse_grid_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("grid config: expected a JSON object");
    GridConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "C") {
            cfg.grid.c_values = detail::real_list(value, key);
        } else if (key == "gamma") {
            cfg.grid.gamma_values = detail::real_list(value, key);
        } else if (key == "epsilon") {
            cfg.grid.epsilon_values = detail::real_list(value, key);
        } else if (key == "kernel") {
            if (!value.is_array()) throw ConfigError("grid config: field 'kernel' must be a list");
            cfg.grid.kernels.clear();
            for (const auto& k : value) {
                if (!k.is_string()) throw ConfigError("grid config: field 'kernel' must hold strings");
                try {
                    cfg.grid.kernels.push_back(parse_kernel(k.get<std::string>()));
                } catch (const ConfigError& e) {
                    throw ConfigError(std::string("grid config: field 'kernel': ") + e.what());
                }
            }
        } else if (key == "folds") {
            cfg.folds = detail::positive_int<std::size_t>(value, key);
            if (*cfg.folds < 2) throw ConfigError("grid config: field 'folds' must be at least 2");
        } else if (key == "seed") {
            cfg.seed = detail::positive_int<std::uint64_t>(value, key);
        } else if (key == "workers") {
            cfg.workers = detail::positive_int<std::size_t>(value, key);
            if (*cfg.workers < 1) throw ConfigError("grid config: field 'workers' must be at least 1");
        } else {
            throw ConfigError("grid config: unknown field '" + key + "'");
        }
    }
    try {
        cfg.grid.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("grid config: ") + e.what());
    }
    return cfg;
}

inline GridConfig parse_grid_config_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("grid config: ") + e.what());
    }
    return parse_grid_config(j);
}

}  // namespace cmsent
