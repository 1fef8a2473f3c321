#pragma once

#include "tfmd/motorsim/motor_spec.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfmd::pipeline {

inline constexpr std::size_t kClasses = static_cast<std::size_t>(motorsim::kNumClasses);

using ConfusionMatrix = std::array<std::array<std::size_t, kClasses>, kClasses>;

/// cell (i, j) counts samples of true class i predicted as j.
ConfusionMatrix confusion_matrix(std::span<const int> predictions, std::span<const int> labels);

std::size_t total(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);
// Column/row ratios; a class with an empty denominator scores 0.
std::array<double, kClasses> precision(const ConfusionMatrix& cm);
std::array<double, kClasses> recall(const ConfusionMatrix& cm);

std::string confusion_csv(const ConfusionMatrix& cm);

struct FoldResult {
    std::size_t fold;
    bool ok;
    double accuracy;  // 0 for failed folds
    std::size_t n_train;
    std::size_t n_test;
    std::string error;  // empty unless failed
};

struct EvalReport {
    std::string method;  // method code, e.g. "STFT-O"
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<FoldResult> folds;
    ConfusionMatrix confusion{};  // pooled over successful folds
    // Per fold, test-sample count of each load level (audit only).
    std::vector<std::array<std::size_t, 5>> fold_load_counts;

    // Over successful folds only.
    std::vector<double> fold_accuracies() const;
    double mean_accuracy() const;
    double std_accuracy() const;  // sample standard deviation (n - 1)
    std::size_t failed_folds() const;
};

nlohmann::json to_json(const EvalReport& r);
EvalReport eval_report_from_json(const nlohmann::json& j);

/// Table I reference values (accuracy on the real motor data set, in %).
std::optional<double> published_accuracy(const std::string& method_code);

struct ComparisonRow {
    std::string method;
    double mean;
    double std;
    std::size_t folds_ok;
    std::size_t folds_failed;
    std::optional<double> published_pct;
};

/// One row per report, sorted by mean accuracy descending; ties by method
/// code ascending. Throws InvalidArgument on an empty input.
std::vector<ComparisonRow> compare_methods(std::span<const EvalReport> reports);

nlohmann::json comparison_json(std::span<const ComparisonRow> rows);
std::string comparison_csv(std::span<const ComparisonRow> rows);
std::string comparison_table(std::span<const ComparisonRow> rows);

// method,fold,accuracy for every successful fold of every report.
std::string boxplot_csv(std::span<const EvalReport> reports);

}  // namespace tfmd::pipeline
