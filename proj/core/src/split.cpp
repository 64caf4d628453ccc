#include "gsr/split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gsr/rng.hpp"

namespace gsr {

DatasetSplit split_dataset(std::vector<std::string> ids, const std::array<double, 3>& ratios, std::uint64_t seed) {
  for (const double r : ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("split_dataset: ratios must be positive");
  }
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("split_dataset: ratios must sum to 1");
  }

  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw std::invalid_argument("split_dataset: duplicate id \"" + *dup + "\"");
  }

  Xoshiro256ss rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(ids[i - 1], ids[j]);
  }

  const auto n = static_cast<double>(ids.size());
  const auto train_end = static_cast<std::size_t>(std::floor(n * ratios[0]));
  const auto val_end = static_cast<std::size_t>(std::floor(n * (ratios[0] + ratios[1])));

  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  split.train_ids.assign(ids.begin(), ids.begin() + train_end);
  split.val_ids.assign(ids.begin() + train_end, ids.begin() + val_end);
  split.test_ids.assign(ids.begin() + val_end, ids.end());
  return split;
}

}  // namespace gsr
