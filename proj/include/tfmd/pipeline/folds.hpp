#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tfmd::pipeline {

struct FoldPlan {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of;  // fold index per sample

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Class-stratified k-fold assignment. Each class is shuffled with a seeded
/// generator and dealt round-robin starting where the previous class
/// stopped, so per-class fold counts differ by at most one and overall fold
/// sizes do too. Throws InvalidArgument if k < 2 or any class present has
/// fewer than k samples.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed);

}  // namespace tfmd::pipeline
