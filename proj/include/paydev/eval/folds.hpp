#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paydev/error.hpp"
#include "paydev/rng.hpp"

namespace paydev::eval {

// fold[r][i] is the test fold of sample i in repeat r.
using FoldAssignments = std::vector<std::vector<int>>;

// Repeated stratified k-fold. Per repeat, each class is shuffled and dealt
// round-robin across folds, the dealer continuing from where the previous
// class stopped, so each fold holds floor or ceil of n_c / k samples of class
// c and fold sizes differ by at most one.
inline FoldAssignments stratified_kfold(std::span<const int> labels, int k, int repeats, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::usage, "folds must be >= 2");
  if (repeats < 1) throw Error(ErrorCode::usage, "repeats must be >= 1");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == 1 ? 1 : 0].push_back(i);
  for (const auto& c : by_class)
    if (c.size() < static_cast<std::size_t>(k))
      throw Error(ErrorCode::too_few_per_class,
                  std::to_string(k) + " folds but a class has only " + std::to_string(c.size()) + " samples");

  FoldAssignments out;
  for (int r = 0; r < repeats; ++r) {
    Rng rng(derive_seed(seed, {0x666f6c64ULL, static_cast<std::uint64_t>(r)}));
    std::vector<int> fold(labels.size(), -1);
    std::size_t dealer = 0;
    for (auto members : by_class) {
      rng.shuffle(members);
      for (std::size_t i : members) fold[i] = static_cast<int>(dealer++ % static_cast<std::size_t>(k));
    }
    out.push_back(std::move(fold));
  }
  return out;
}

// Plain (unstratified) shuffled k-fold partition of n indices; k == n gives
// leave-one-out.
inline std::vector<int> kfold_partition(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > n) throw Error(ErrorCode::usage, "need 2 <= k <= n");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return fold;
}

}  // namespace paydev::eval
