#include "rbl/pair_index.hpp"

#include "rbl/errors.hpp"

namespace rbl {

std::string_view to_string(PairClass c) {
  switch (c) {
    case PairClass::kAnchorAnchor: return "AA";
    case PairClass::kAnchorTarget: return "AT";
    case PairClass::kTargetTarget: return "TT";
  }
  return "?";
}

PairIndex::PairIndex(int num_anchors, int num_targets)
    : num_anchors_(num_anchors), num_targets_(num_targets) {
  if (num_anchors < 1 || num_targets < 0) {
    throw InvalidInputError("pair index needs at least one anchor and a non-negative target count");
  }
  const int m = num_anchors;
  const int n = num_targets;
  pairs_.reserve(static_cast<std::size_t>(m + n) * (m + n - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs_.push_back({i, j});
  size_aa_ = pairs_.size();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) pairs_.push_back({i, m + j});
  size_at_ = pairs_.size() - size_aa_;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs_.push_back({m + i, m + j});
  size_tt_ = pairs_.size() - size_aa_ - size_at_;
}

PairClass PairIndex::pair_class(std::size_t p) const {
  if (p < size_aa_) return PairClass::kAnchorAnchor;
  if (p < size_aa_ + size_at_) return PairClass::kAnchorTarget;
  return PairClass::kTargetTarget;
}

PairIndex build_pair_index(int num_anchors, int num_targets) {
  return PairIndex(num_anchors, num_targets);
}

}  // namespace rbl
