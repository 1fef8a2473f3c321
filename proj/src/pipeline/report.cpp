#include "tfmd/pipeline/report.hpp"

#include "tfmd/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace tfmd::pipeline {

ConfusionMatrix confusion_matrix(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) throw InvalidArgument("predictions and labels differ in length");
    ConfusionMatrix cm{};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int t = labels[i], p = predictions[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= kClasses || static_cast<std::size_t>(p) >= kClasses) {
            throw InvalidArgument("class index outside 0..4");
        }
        ++cm[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    }
    return cm;
}

std::size_t total(const ConfusionMatrix& cm) {
    std::size_t n = 0;
    for (const auto& row : cm) n = std::accumulate(row.begin(), row.end(), n);
    return n;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::size_t n = total(cm);
    if (n == 0) return 0.0;
    std::size_t trace = 0;
    for (std::size_t i = 0; i < kClasses; ++i) trace += cm[i][i];
    return static_cast<double>(trace) / static_cast<double>(n);
}

std::array<double, kClasses> precision(const ConfusionMatrix& cm) {
    std::array<double, kClasses> out{};
    for (std::size_t j = 0; j < kClasses; ++j) {
        std::size_t col = 0;
        for (std::size_t i = 0; i < kClasses; ++i) col += cm[i][j];
        out[j] = col ? static_cast<double>(cm[j][j]) / static_cast<double>(col) : 0.0;
    }
    return out;
}

std::array<double, kClasses> recall(const ConfusionMatrix& cm) {
    std::array<double, kClasses> out{};
    for (std::size_t i = 0; i < kClasses; ++i) {
        const std::size_t row = std::accumulate(cm[i].begin(), cm[i].end(), std::size_t{0});
        out[i] = row ? static_cast<double>(cm[i][i]) / static_cast<double>(row) : 0.0;
    }
    return out;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::string out = "true\\predicted";
    for (const auto c : motorsim::kAllClasses) out += "," + motorsim::class_name(c);
    out += "\n";
    for (std::size_t i = 0; i < kClasses; ++i) {
        out += motorsim::class_name(motorsim::kAllClasses[i]);
        for (std::size_t j = 0; j < kClasses; ++j) out += "," + std::to_string(cm[i][j]);
        out += "\n";
    }
    return out;
}

std::vector<double> EvalReport::fold_accuracies() const {
    std::vector<double> out;
    for (const auto& f : folds) {
        if (f.ok) out.push_back(f.accuracy);
    }
    return out;
}

double EvalReport::mean_accuracy() const {
    const auto acc = fold_accuracies();
    if (acc.empty()) return 0.0;
    return std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
}

double EvalReport::std_accuracy() const {
    const auto acc = fold_accuracies();
    if (acc.size() < 2) return 0.0;
    const double m = mean_accuracy();
    double ss = 0.0;
    for (const double a : acc) ss += (a - m) * (a - m);
    return std::sqrt(ss / static_cast<double>(acc.size() - 1));
}

std::size_t EvalReport::failed_folds() const {
    return static_cast<std::size_t>(std::count_if(folds.begin(), folds.end(), [](const FoldResult& f) { return !f.ok; }));
}

nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : r.folds) {
        nlohmann::json jf{{"fold", f.fold}, {"ok", f.ok}, {"accuracy", f.accuracy}, {"n_train", f.n_train},
                          {"n_test", f.n_test}};
        if (!f.ok) jf["error"] = f.error;
        folds.push_back(std::move(jf));
    }
    nlohmann::json classes = nlohmann::json::array();
    const auto prec = precision(r.confusion);
    const auto rec = recall(r.confusion);
    for (std::size_t i = 0; i < kClasses; ++i) {
        classes.push_back({{"class", motorsim::class_name(motorsim::kAllClasses[i])},
                           {"label", i},
                           {"precision", prec[i]},
                           {"recall", rec[i]}});
    }
    return {{"method", r.method},
            {"k", r.k},
            {"seed", r.seed},
            {"folds", folds},
            {"fold_accuracies", r.fold_accuracies()},
            {"mean_accuracy", r.mean_accuracy()},
            {"std_accuracy", r.std_accuracy()},
            {"failed_folds", r.failed_folds()},
            {"confusion_matrix", r.confusion},
            {"pooled_accuracy", accuracy(r.confusion)},
            {"per_class", classes},
            {"fold_load_counts", r.fold_load_counts}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
    EvalReport r;
    r.method = j.at("method").get<std::string>();
    r.k = j.at("k").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jf : j.at("folds")) {
        r.folds.push_back({jf.at("fold").get<std::size_t>(), jf.at("ok").get<bool>(), jf.at("accuracy").get<double>(),
                           jf.at("n_train").get<std::size_t>(), jf.at("n_test").get<std::size_t>(),
                           jf.value("error", std::string{})});
    }
    r.confusion = j.at("confusion_matrix").get<ConfusionMatrix>();
    r.fold_load_counts = j.value("fold_load_counts", std::vector<std::array<std::size_t, 5>>{});
    return r;
}

std::optional<double> published_accuracy(const std::string& method_code) {
    if (method_code == "STFT-O") return 97.65;
    if (method_code == "STFT-R") return 96.32;
    if (method_code == "STFT") return 96.08;
    if (method_code == "STFT-OR") return 96.03;
    if (method_code == "STFT-S") return 88.27;
    return std::nullopt;
}

std::vector<ComparisonRow> compare_methods(std::span<const EvalReport> reports) {
    if (reports.empty()) throw InvalidArgument("compare_methods needs at least one report");
    std::vector<ComparisonRow> rows;
    for (const auto& r : reports) {
        rows.push_back({r.method, r.mean_accuracy(), r.std_accuracy(), r.fold_accuracies().size(), r.failed_folds(),
                        published_accuracy(r.method)});
    }
    std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        return a.method < b.method;
    });
    return rows;
}

nlohmann::json comparison_json(std::span<const ComparisonRow> rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"method", r.method},
                       {"mean_accuracy", r.mean},
                       {"std_accuracy", r.std},
                       {"folds_ok", r.folds_ok},
                       {"folds_failed", r.folds_failed},
                       {"published_real_data_pct", r.published_pct ? nlohmann::json(*r.published_pct) : nlohmann::json()}});
    }
    return {{"rows", out},
            {"note", "published_real_data_pct: published, real data; reference annotation only, not comparable to "
                     "synthetic-data accuracy"}};
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
    std::string out = "method,mean_accuracy,std_accuracy,folds_ok,folds_failed,published_real_data_pct\n";
    char buf[200];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%zu,%zu,", r.method.c_str(), r.mean, r.std, r.folds_ok,
                      r.folds_failed);
        out += buf;
        if (r.published_pct) {
            std::snprintf(buf, sizeof buf, "%.2f", *r.published_pct);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string comparison_table(std::span<const ComparisonRow> rows) {
    std::string out;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-8s  %-18s  %-12s  %s\n", "Method", "Accuracy (%)", "Failed folds",
                  "Published, real data (%)");
    out += buf;
    for (const auto& r : rows) {
        char acc[40];
        std::snprintf(acc, sizeof acc, "%.2f +/- %.2f", 100.0 * r.mean, 100.0 * r.std);
        char pub[20] = "-";
        if (r.published_pct) std::snprintf(pub, sizeof pub, "%.2f", *r.published_pct);
        std::snprintf(buf, sizeof buf, "%-8s  %-18s  %-12zu  %s\n", r.method.c_str(), acc, r.folds_failed, pub);
        out += buf;
    }
    return out;
}

std::string boxplot_csv(std::span<const EvalReport> reports) {
    std::string out = "method,fold,accuracy\n";
    char buf[120];
    for (const auto& r : reports) {
        for (const auto& f : r.folds) {
            if (!f.ok) continue;
            std::snprintf(buf, sizeof buf, "%s,%zu,%.9g\n", r.method.c_str(), f.fold, f.accuracy);
            out += buf;
        }
    }
    return out;
}

}  // namespace tfmd::pipeline
