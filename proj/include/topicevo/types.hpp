#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace topicevo {

/// Sorted, duplicate-free list of words.
using WordSet = std::vector<std::string>;

WordSet make_word_set(std::vector<std::string> words);

/// Identifies one topic: (snapshot index, cluster id within that snapshot).
struct ClusterKey {
  std::size_t snapshot = 0;
  std::size_t cluster = 0;

  auto operator<=>(const ClusterKey&) const = default;

  /// "t,id" form used as a JSON object key.
  std::string to_string() const;
};

}  // namespace topicevo
