#include "tfmd/pipeline/run_all.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"
#include "tfmd/common/parallel.hpp"
#include "tfmd/motorsim/dataset.hpp"
#include "tfmd/motorsim/separability.hpp"
#include "tfmd/pipeline/corpus.hpp"
#include "tfmd/pipeline/cross_validate.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>

namespace tfmd::pipeline {

RunConfig::RunConfig() : render(corpus_render_defaults()) {}

namespace {

nlohmann::json train_json(const cnn::TrainConfig& t) {
    return {{"learning_rate", t.learning_rate},
            {"batch_size", t.batch_size},
            {"epochs", t.epochs},
            {"optimizer", t.optimizer == cnn::Optimizer::Adam ? "adam" : "sgd"},
            {"beta1", t.beta1},
            {"beta2", t.beta2},
            {"epsilon", t.epsilon}};
}

cnn::TrainConfig train_from_json(const nlohmann::json& j, cnn::TrainConfig t) {
    for (const auto& [key, value] : j.items()) {
        if (key == "learning_rate") {
            t.learning_rate = value.get<double>();
        } else if (key == "batch_size") {
            t.batch_size = value.get<std::size_t>();
        } else if (key == "epochs") {
            t.epochs = value.get<std::size_t>();
        } else if (key == "optimizer") {
            const auto name = value.get<std::string>();
            if (name == "adam") {
                t.optimizer = cnn::Optimizer::Adam;
            } else if (name == "sgd") {
                t.optimizer = cnn::Optimizer::SGD;
            } else {
                throw InvalidArgument("unknown optimizer '" + name + "'");
            }
        } else if (key == "beta1") {
            t.beta1 = value.get<double>();
        } else if (key == "beta2") {
            t.beta2 = value.get<double>();
        } else if (key == "epsilon") {
            t.epsilon = value.get<double>();
        } else {
            throw InvalidArgument("unknown train option '" + key + "'");
        }
    }
    t.validate();
    return t;
}

class RunLog {
public:
    explicit RunLog(const std::filesystem::path& path) : out_(path), start_(std::chrono::steady_clock::now()) {
        if (!out_) throw IoError("cannot open " + path.string());
    }

    void line(const std::string& stage, const std::string& message) {
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char buf[32];
        std::snprintf(buf, sizeof buf, "[%8.1fs] ", t);
        std::lock_guard lock(mu_);
        out_ << buf << stage << ": " << message << "\n";
        out_.flush();
        std::fprintf(stderr, "%s%s: %s\n", buf, stage.c_str(), message.c_str());
    }

private:
    std::ofstream out_;
    std::chrono::steady_clock::time_point start_;
    std::mutex mu_;
};

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json methods = nlohmann::json::array();
    for (const auto m : c.methods) methods.push_back(tfr::method_slug(m));
    return {{"motor", motorsim::to_json(c.motor)},
            {"per_cell", c.per_cell},
            {"seed", c.seed},
            {"methods", methods},
            {"k", c.k},
            {"train", train_json(c.train)},
            {"transform", to_json(c.transform)},
            {"render", to_json(c.render)},
            {"threads", c.threads}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "motor") {
            c.motor = motorsim::motor_spec_from_json(value);
        } else if (key == "per_cell") {
            c.per_cell = value.get<std::size_t>();
        } else if (key == "seed") {
            c.seed = value.get<std::uint64_t>();
        } else if (key == "methods") {
            c.methods.clear();
            for (const auto& m : value) c.methods.push_back(tfr::parse_method(m.get<std::string>()));
        } else if (key == "k") {
            c.k = value.get<std::size_t>();
        } else if (key == "train") {
            c.train = train_from_json(value, c.train);
        } else if (key == "transform") {
            c.transform = transform_config_from_json(value, c.transform);
        } else if (key == "render") {
            c.render = render_options_from_json(value, c.render);
        } else if (key == "threads") {
            c.threads = value.get<std::size_t>();
        } else {
            throw InvalidArgument("unknown run config key '" + key + "'");
        }
    }
    if (c.per_cell < 1) throw InvalidArgument("per_cell must be at least 1");
    if (c.k < 2) throw InvalidArgument("k must be at least 2");
    c.motor.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return run_config_from_json(read_json(path)); }

RunSummary run_all(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunLog log(out_dir / "run_log.txt");
    const std::size_t threads = cfg.threads ? cfg.threads : thread_budget();
    write_json(out_dir / "run_config.json", to_json(cfg));
    log.line("config", "per_cell=" + std::to_string(cfg.per_cell) + " k=" + std::to_string(cfg.k) +
                           " epochs=" + std::to_string(cfg.train.epochs) + " threads=" + std::to_string(threads));

    const auto dataset_dir = out_dir / "dataset";
    const auto manifest = motorsim::generate_dataset(cfg.motor, cfg.per_cell, cfg.seed, dataset_dir, threads);
    log.line("gen", std::to_string(manifest.entries.size()) + " signals");

    RunSummary summary;
    nlohmann::json separability = nlohmann::json::array();
    for (const auto method : cfg.methods) {
        const std::string code = tfr::method_code(method);
        const std::string slug = tfr::method_slug(method);
        try {
            const auto corpus_dir = out_dir / "images" / slug;
            const auto corpus = render_corpus(dataset_dir, method, corpus_dir, cfg.transform, cfg.render, threads);
            log.line("render", code + ": " + std::to_string(corpus.entries.size()) + " images");

            const auto full_load = manifest.filter_load(100);
            if (full_load.counts_per_class()[0] >= 10) {
                const auto sep = motorsim::class_separability_report(full_load, dataset_dir, method, cfg.transform,
                                                                     cfg.render);
                separability.push_back(motorsim::to_json(sep));
                char buf[64];
                std::snprintf(buf, sizeof buf, "min r at full load %.3f", sep.min_ratio());
                log.line("separability", code + ": " + buf);
            }

            const auto loaded = load_corpus_images(corpus_dir, corpus, threads);
            const auto report_dir = out_dir / "reports" / slug;
            std::filesystem::create_directories(report_dir);
            CvOptions cv{cfg.k, cfg.seed, threads, report_dir};
            EvalReport report = cross_validate(loaded.images, loaded.loads, code, cnn_fold_trainer(cfg.train), cv);
            write_json(report_dir / "eval_report.json", to_json(report));
            for (const auto& f : report.folds) {
                if (!f.ok) log.line("cv", code + ": fold " + std::to_string(f.fold) + " failed: " + f.error);
            }
            char buf[96];
            std::snprintf(buf, sizeof buf, "mean accuracy %.4f +/- %.4f (%zu failed folds)", report.mean_accuracy(),
                          report.std_accuracy(), report.failed_folds());
            log.line("cv", code + ": " + buf);
            summary.reports.push_back(std::move(report));
        } catch (const std::exception& e) {
            summary.failed.push_back(code + ": " + e.what());
            log.line("error", code + ": " + e.what());
        }
    }

    write_json(out_dir / "separability.json", separability);
    if (!summary.reports.empty()) {
        const auto rows = compare_methods(summary.reports);
        write_json(out_dir / "comparison.json", comparison_json(rows));
        write_text(out_dir / "comparison.csv", comparison_csv(rows));
        write_text(out_dir / "comparison.txt", comparison_table(rows));
        write_text(out_dir / "boxplot.csv", boxplot_csv(summary.reports));
        log.line("compare", std::to_string(rows.size()) + " methods");
    }
    log.line("done", std::to_string(summary.failed.size()) + " failed methods");
    return summary;
}

}  // namespace tfmd::pipeline
