// Command-line front end: dataset generation, corpus rendering,
// cross-validation, comparison and the end-to-end run.

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"
#include "tfmd/common/parallel.hpp"
#include "tfmd/motorsim/dataset.hpp"
#include "tfmd/pipeline/corpus.hpp"
#include "tfmd/pipeline/cross_validate.hpp"
#include "tfmd/pipeline/run_all.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tfmd;

namespace {

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int fail(const std::string& kind, const std::string& message, int code = 1) {
    print_json({{"error", kind}, {"message", message}});
    return code;
}

int cmd_gen(const std::optional<std::string>& config, std::size_t per_cell, std::uint64_t seed,
            const std::string& out) {
    const motorsim::MotorSpec spec = config ? motorsim::load_motor_spec(*config) : motorsim::MotorSpec{};
    const auto manifest = motorsim::generate_dataset(spec, per_cell, seed, out, thread_budget());
    print_json({{"out", out}, {"total", manifest.entries.size()}});
    return 0;
}

int cmd_render(const std::string& method_text, const std::string& in, const std::string& out,
               const std::optional<double>& floor_db, const std::optional<double>& max_freq, bool full_band,
               const std::optional<std::string>& transform_config) {
    const auto method = tfr::parse_method(method_text);
    auto ropts = pipeline::corpus_render_defaults();
    if (floor_db) ropts.floor_db = *floor_db;
    if (max_freq) ropts.max_freq_hz = *max_freq;
    if (full_band) ropts.max_freq_hz.reset();
    ropts = pipeline::render_options_from_json(json::object(), ropts);
    const auto tcfg =
        transform_config ? pipeline::transform_config_from_json(read_json(*transform_config)) : tfr::TransformConfig{};
    const auto corpus = pipeline::render_corpus(in, method, out, tcfg, ropts, thread_budget());
    print_json({{"out", out}, {"method", corpus.method}, {"total", corpus.entries.size()}});
    return 0;
}

int cmd_cv(const std::string& images, const std::string& method_text, std::size_t k, std::uint64_t seed,
           const cnn::TrainConfig& train, const std::string& out) {
    const auto method = tfr::parse_method(method_text);
    const auto corpus = pipeline::load_corpus(images);
    if (corpus.method != tfr::method_code(method)) {
        throw InvalidArgument("corpus at " + images + " was rendered with " + corpus.method + ", not " +
                              tfr::method_code(method));
    }
    const std::size_t threads = thread_budget();
    const auto loaded = pipeline::load_corpus_images(images, corpus, threads);
    fs::create_directories(out);
    const auto report = pipeline::cross_validate(loaded.images, loaded.loads, corpus.method,
                                                 pipeline::cnn_fold_trainer(train), {k, seed, threads, fs::path(out)});
    write_json(fs::path(out) / "eval_report.json", pipeline::to_json(report));
    print_json({{"out", out},
                {"method", report.method},
                {"mean_accuracy", report.mean_accuracy()},
                {"std_accuracy", report.std_accuracy()},
                {"failed_folds", report.failed_folds()}});
    return 0;
}

int cmd_compare(const std::string& reports_dir, const std::string& out) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(reports_dir)) {
        if (entry.is_regular_file() && entry.path().filename() == "eval_report.json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<pipeline::EvalReport> reports;
    for (const auto& f : files) reports.push_back(pipeline::eval_report_from_json(read_json(f)));
    const auto rows = pipeline::compare_methods(reports);
    const fs::path out_path(out);
    if (out_path.extension() == ".csv") {
        write_text(out_path, pipeline::comparison_csv(rows));
    } else if (out_path.extension() == ".json") {
        write_json(out_path, pipeline::comparison_json(rows));
    } else {
        throw InvalidArgument("--out must end in .json or .csv");
    }
    std::cout << pipeline::comparison_table(rows);
    return 0;
}

int cmd_run_all(const std::optional<std::string>& config, const std::string& out) {
    const pipeline::RunConfig cfg = config ? pipeline::load_run_config(*config) : pipeline::RunConfig{};
    const auto summary = pipeline::run_all(cfg, out);
    json methods = json::object();
    for (const auto& r : summary.reports) methods[r.method] = r.mean_accuracy();
    print_json({{"out", out}, {"mean_accuracy", methods}, {"failed", summary.failed}});
    return summary.failed.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-frequency motor fault diagnosis pipeline"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate a synthetic motor-current dataset");
    std::optional<std::string> gen_config;
    std::size_t per_cell = 20;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--config", gen_config, "MotorSpec JSON (defaults when omitted)");
    gen->add_option("--per-cell", per_cell, "Signals per (class, load) cell")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    auto* render = app.add_subcommand("render", "Render a dataset into a PNG corpus");
    std::string render_method, render_in, render_out;
    std::optional<double> floor_db, max_freq;
    std::optional<std::string> transform_config;
    bool full_band = false;
    render->add_option("--method", render_method, "stft|stft-o|stft-r|stft-or|stft-s")->required();
    render->add_option("--in", render_in, "Dataset directory")->required();
    render->add_option("--out", render_out, "Corpus directory")->required();
    render->add_option("--floor-db", floor_db, "dB floor (default -60)");
    render->add_option("--max-freq", max_freq, "Frequency crop in Hz (default 500)");
    render->add_flag("--full-band", full_band, "Disable the frequency crop");
    render->add_option("--transform-config", transform_config, "TransformConfig JSON");

    auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation on a corpus");
    std::string cv_images, cv_method, cv_out;
    std::size_t k = 10;
    std::uint64_t cv_seed = 1;
    cnn::TrainConfig train;
    cv->add_option("--images", cv_images, "Corpus directory")->required();
    cv->add_option("--method", cv_method, "Method the corpus was rendered with")->required();
    cv->add_option("--k", k, "Folds");
    cv->add_option("--seed", cv_seed, "Master seed");
    cv->add_option("--epochs", train.epochs, "Training epochs");
    cv->add_option("--lr", train.learning_rate, "Learning rate");
    cv->add_option("--batch", train.batch_size, "Mini-batch size");
    cv->add_option("--out", cv_out, "Report directory")->required();

    auto* compare = app.add_subcommand("compare", "Tabulate EvalReports");
    std::string reports_dir, compare_out;
    compare->add_option("--reports", reports_dir, "Directory searched for eval_report.json")->required();
    compare->add_option("--out", compare_out, "table.json or table.csv")->required();

    auto* run_all = app.add_subcommand("run-all", "Generate, render, cross-validate and compare");
    std::optional<std::string> run_config;
    std::string run_out;
    run_all->add_option("--config", run_config, "RunConfig JSON (defaults when omitted)");
    run_all->add_option("--out", run_out, "Artifacts directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (*gen) return cmd_gen(gen_config, per_cell, gen_seed, gen_out);
        if (*render) return cmd_render(render_method, render_in, render_out, floor_db, max_freq, full_band,
                                       transform_config);
        if (*cv) return cmd_cv(cv_images, cv_method, k, cv_seed, train, cv_out);
        if (*compare) return cmd_compare(reports_dir, compare_out);
        if (*run_all) return cmd_run_all(run_config, run_out);
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail("invalid-config", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
