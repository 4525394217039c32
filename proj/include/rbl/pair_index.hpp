#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace rbl {

enum class PairClass { kAnchorAnchor, kAnchorTarget, kTargetTarget };

std::string_view to_string(PairClass c);

/// Zero-based node indices with i < j. Anchors are nodes [0, M), landmarks
/// are nodes [M, M + N).
struct NodePair {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

/// Canonical enumeration of all node pairs, grouped as [AA | AT | TT] with
/// each group in lexicographic order.
class PairIndex {
 public:
  PairIndex() = default;
  PairIndex(int num_anchors, int num_targets);

  int num_anchors() const { return num_anchors_; }
  int num_targets() const { return num_targets_; }
  int num_nodes() const { return num_anchors_ + num_targets_; }

  std::size_t size() const { return pairs_.size(); }
  std::size_t size_aa() const { return size_aa_; }
  std::size_t size_at() const { return size_at_; }
  std::size_t size_tt() const { return size_tt_; }
  std::size_t offset_at() const { return size_aa_; }
  std::size_t offset_tt() const { return size_aa_ + size_at_; }

  const NodePair& operator[](std::size_t p) const { return pairs_[p]; }
  const std::vector<NodePair>& pairs() const { return pairs_; }
  PairClass pair_class(std::size_t p) const;

  /// Position of the (anchor m, target n) edge inside the AT block.
  std::size_t at_slot(int anchor, int target) const {
    return static_cast<std::size_t>(anchor) * num_targets_ + target;
  }

  friend bool operator==(const PairIndex&, const PairIndex&) = default;

 private:
  int num_anchors_ = 0;
  int num_targets_ = 0;
  std::size_t size_aa_ = 0;
  std::size_t size_at_ = 0;
  std::size_t size_tt_ = 0;
  std::vector<NodePair> pairs_;
};

PairIndex build_pair_index(int num_anchors, int num_targets);

}  // namespace rbl
