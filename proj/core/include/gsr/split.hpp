#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gsr {

/// Deterministic train/val/test partition of a sample id set.
struct DatasetSplit {
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{};
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;
  std::vector<std::string> test_ids;
};

/// Sorts the ids, applies a Fisher-Yates shuffle driven by xoshiro256**
/// seeded with `seed`, then cuts at floor(N*r_train) and
/// floor(N*(r_train+r_val)); the remainder is the test set. Identical
/// (id set, ratios, seed) inputs give identical lists regardless of the
/// incoming order. Ratios must be positive and sum to 1 within 1e-9;
/// duplicate ids are rejected.
DatasetSplit split_dataset(std::vector<std::string> ids, const std::array<double, 3>& ratios, std::uint64_t seed);

}  // namespace gsr
