#include "tfmd/pipeline/cross_validate.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"
#include "tfmd/common/parallel.hpp"

#include <algorithm>

namespace tfmd::pipeline {

FoldTrainer cnn_fold_trainer(cnn::TrainConfig cfg, cnn::Architecture arch) {
    return [cfg, arch](const FoldInput& in) {
        cnn::Network<float> net(arch);
        net.initialize(in.seed);
        cnn::TrainConfig fold_cfg = cfg;
        fold_cfg.seed = in.seed;
        FoldOutput out;
        out.history = cnn::train(net, in.train, fold_cfg, &in.test);
        out.predictions = cnn::predict(net, in.test).labels;
        out.model = std::move(net);
        return out;
    };
}

namespace {

int load_slot(int load) {
    const auto it = std::find(motorsim::kLoadLevels.begin(), motorsim::kLoadLevels.end(), load);
    if (it == motorsim::kLoadLevels.end()) throw InvalidArgument("unknown load level " + std::to_string(load));
    return static_cast<int>(it - motorsim::kLoadLevels.begin());
}

}  // namespace

EvalReport cross_validate(const cnn::ImageSet<float>& data, std::span<const int> loads, const std::string& method,
                          const FoldTrainer& trainer, const CvOptions& opts) {
    if (!loads.empty() && loads.size() != data.size()) throw InvalidArgument("loads must match the sample count");
    const FoldPlan plan = stratified_kfold(data.labels, opts.k, opts.seed);

    EvalReport report;
    report.method = method;
    report.k = opts.k;
    report.seed = opts.seed;
    report.folds.resize(opts.k);
    report.fold_load_counts.assign(loads.empty() ? 0 : opts.k, {});
    std::vector<ConfusionMatrix> fold_cm(opts.k, ConfusionMatrix{});

    parallel_for(opts.k, opts.threads, [&](std::size_t f) {
        const auto test_idx = plan.test_indices(f);
        const auto train_idx = plan.train_indices(f);
        // Held-out samples are copied out before the trainer sees anything.
        const cnn::ImageSet<float> train = data.subset(train_idx);
        const cnn::ImageSet<float> test = data.subset(test_idx);
        FoldResult& result = report.folds[f];
        result = {f, false, 0.0, train.size(), test.size(), {}};
        if (!loads.empty()) {
            for (const auto i : test_idx) ++report.fold_load_counts[f][static_cast<std::size_t>(load_slot(loads[i]))];
        }
        try {
            FoldOutput out = trainer({f, opts.seed ^ static_cast<std::uint64_t>(f), train, test});
            if (out.predictions.size() != test.size()) throw ShapeMismatch("trainer returned the wrong number of predictions");
            fold_cm[f] = confusion_matrix(out.predictions, test.labels);
            result.ok = true;
            result.accuracy = accuracy(fold_cm[f]);
            if (opts.artifacts_dir) {
                const auto& dir = *opts.artifacts_dir;
                if (out.history) write_text(dir / ("history_fold" + std::to_string(f) + ".csv"), out.history->to_csv());
                if (out.model) {
                    std::filesystem::create_directories(dir / "checkpoints");
                    cnn::save_checkpoint(dir / "checkpoints" / ("fold" + std::to_string(f) + ".ckpt"), *out.model,
                                         {opts.seed ^ static_cast<std::uint64_t>(f),
                                          out.history ? out.history->epochs.size() : 0});
                }
            }
        } catch (const std::exception& e) {
            result.ok = false;
            result.accuracy = 0.0;
            result.error = e.what();
            fold_cm[f] = ConfusionMatrix{};
        }
    });

    for (std::size_t f = 0; f < opts.k; ++f) {
        for (std::size_t i = 0; i < kClasses; ++i) {
            for (std::size_t j = 0; j < kClasses; ++j) report.confusion[i][j] += fold_cm[f][i][j];
        }
    }
    if (opts.artifacts_dir) write_text(*opts.artifacts_dir / "confusion.csv", confusion_csv(report.confusion));
    return report;
}

}  // namespace tfmd::pipeline
