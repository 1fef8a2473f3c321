#include "tfmd/pipeline/folds.hpp"

#include "tfmd/common/error.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace tfmd::pipeline {

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("k must be at least 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (const auto& [label, idx] : by_class) {
        if (idx.size() < k) {
            throw InvalidArgument("class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                                  " samples, fewer than k=" + std::to_string(k));
        }
    }

    FoldPlan plan{k, seed, std::vector<std::size_t>(labels.size(), 0)};
    std::mt19937_64 rng(seed);
    std::size_t next = 0;
    for (auto& [label, idx] : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        for (const auto i : idx) {
            plan.fold_of[i] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

}  // namespace tfmd::pipeline
