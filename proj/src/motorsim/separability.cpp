#include "tfmd/motorsim/separability.hpp"

#include "tfmd/common/error.hpp"
#include "tfmd/dsp/time_series.hpp"

#include <cmath>
#include <map>

namespace tfmd::motorsim {

double SeparabilityReport::min_ratio() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) r = std::min(r, p.ratio);
    return r;
}

bool SeparabilityReport::all_separated() const {
    for (const auto& p : pairs) {
        if (p.flagged) return false;
    }
    return true;
}

nlohmann::json to_json(const SeparabilityReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"a", class_name(p.a)}, {"b", class_name(p.b)}, {"ratio", p.ratio}, {"flagged", p.flagged}});
    }
    return {{"method", r.method}, {"pairs", pairs}, {"min_ratio", r.min_ratio()}};
}

SeparabilityReport separability_from_images(std::span<const int> labels, std::span<const std::vector<float>> images,
                                            const std::string& method) {
    if (labels.size() != images.size()) throw InvalidArgument("labels and images differ in length");
    if (images.empty()) throw InvalidArgument("no images");
    const std::size_t dim = images.front().size();

    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (images[i].size() != dim) throw InvalidArgument("images differ in size");
        members[labels[i]].push_back(i);
    }

    std::map<int, std::vector<double>> mean;
    std::map<int, double> spread;
    for (const auto& [cls, idx] : members) {
        if (idx.size() < 10) throw InvalidArgument("class separability needs at least 10 samples per class");
        std::vector<double> mu(dim, 0.0);
        for (auto i : idx) {
            for (std::size_t d = 0; d < dim; ++d) mu[d] += images[i][d];
        }
        for (auto& v : mu) v /= static_cast<double>(idx.size());
        double ss = 0.0;
        for (auto i : idx) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = images[i][d] - mu[d];
                ss += diff * diff;
            }
        }
        spread[cls] = std::sqrt(ss / static_cast<double>(idx.size()));
        mean[cls] = std::move(mu);
    }

    SeparabilityReport report{method, {}};
    for (auto a = members.begin(); a != members.end(); ++a) {
        for (auto b = std::next(a); b != members.end(); ++b) {
            double d2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = mean[a->first][d] - mean[b->first][d];
                d2 += diff * diff;
            }
            const double denom = spread[a->first] + spread[b->first];
            const double dist = std::sqrt(d2);
            const double r = denom > 0.0 ? dist / denom : (dist > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            report.pairs.push_back({class_from_index(a->first), class_from_index(b->first), r, r < 1.0});
        }
    }
    return report;
}

SeparabilityReport class_separability_report(const DatasetManifest& manifest,
                                             const std::filesystem::path& dataset_root, tfr::Method method,
                                             const tfr::TransformConfig& tcfg, const imaging::RenderOptions& ropts) {
    std::vector<int> labels;
    std::vector<std::vector<float>> images;
    for (const auto& e : manifest.entries) {
        const auto signal = dsp::read_time_series(dataset_root / e.path);
        images.push_back(imaging::image_to_chw(imaging::render_signal(signal.series, method, tcfg, ropts)));
        labels.push_back(static_cast<int>(e.cls));
    }
    return separability_from_images(labels, images, tfr::method_code(method));
}

}  // namespace tfmd::motorsim
