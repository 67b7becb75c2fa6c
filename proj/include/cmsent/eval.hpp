#pragma once

#include <array>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "cmsent/corpus.hpp"
#include "cmsent/error.hpp"

namespace cmsent {

// counts[gold][predicted], indexed by SentimentLabel.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, 3>, 3> counts{};

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& row : counts)
            for (auto c : row) t += c;
        return t;
    }

    std::size_t row_sum(std::size_t g) const { return counts[g][0] + counts[g][1] + counts[g][2]; }
    std::size_t column_sum(std::size_t p) const { return counts[0][p] + counts[1][p] + counts[2][p]; }
};

inline ConfusionMatrix confusion(std::span<const SentimentLabel> gold, std::span<const SentimentLabel> pred) {
    if (gold.size() != pred.size())
        throw DataError("confusion: " + std::to_string(gold.size()) + " gold labels vs " +
                        std::to_string(pred.size()) + " predictions");
    if (gold.empty()) throw DataError("confusion: nothing to score");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++m.counts[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(pred[i])];
    return m;
}

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    // Set when precision or recall had an empty denominator and was taken as 0.
    bool undefined = false;
};

struct EvalReport {
    std::array<ClassScores, 3> per_class{};
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::size_t total_support = 0;

    const ClassScores& operator[](SentimentLabel label) const { return per_class[static_cast<std::size_t>(label)]; }
};

inline double f1_score(double precision, double recall) {
    const double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

inline EvalReport report(const ConfusionMatrix& m) {
    EvalReport r;
    for (std::size_t c = 0; c < 3; ++c) {
        auto& s = r.per_class[c];
        const auto col = m.column_sum(c);
        const auto row = m.row_sum(c);
        const auto tp = static_cast<double>(m.counts[c][c]);
        s.precision = col ? tp / static_cast<double>(col) : 0.0;
        s.recall = row ? tp / static_cast<double>(row) : 0.0;
        s.undefined = col == 0 || row == 0;
        s.f1 = f1_score(s.precision, s.recall);
        s.support = row;
        r.total_support += row;
    }
    for (const auto& s : r.per_class) {
        r.macro_precision += s.precision;
        r.macro_recall += s.recall;
        r.macro_f1 += s.f1;
    }
    r.macro_precision /= 3.0;
    r.macro_recall /= 3.0;
    r.macro_f1 /= 3.0;
    return r;
}

inline double macro_f1(std::span<const SentimentLabel> gold, std::span<const SentimentLabel> pred) {
    return report(confusion(gold, pred)).macro_f1;
}

// Table with rows negative, neutral, positive, Macro avg.; two decimals
// except the macro F1, which gets three.
inline std::string format_report(const EvalReport& r) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %9s %9s %9s %9s\n", "Class", "Precision", "Recall", "F1-score",
                  "Support");
    out += line;
    for (auto label : all_labels) {
        const auto& s = r[label];
        std::snprintf(line, sizeof line, "%-10s %9.2f %9.2f %9.2f %9zu\n", std::string(to_string(label)).c_str(),
                      s.precision, s.recall, s.f1, s.support);
        out += line;
    }
    std::snprintf(line, sizeof line, "%-10s %9.2f %9.2f %9.3f %9zu\n", "Macro avg.", r.macro_precision,
                  r.macro_recall, r.macro_f1, r.total_support);
    out += line;
    return out;
}

inline nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json j;
    for (auto label : all_labels) {
        const auto& s = r[label];
        j["per_class"][std::string(to_string(label))] = {
            {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
            {"support", s.support},     {"undefined", s.undefined}};
    }
    j["macro_precision"] = r.macro_precision;
    j["macro_recall"] = r.macro_recall;
    j["macro_f1"] = r.macro_f1;
    j["total_support"] = r.total_support;
    return j;
}

}  // namespace cmsent
