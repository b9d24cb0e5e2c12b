#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace lscd {

struct VocabEntry {
  std::string word;
  std::int64_t count = 0;
};

// Bijective word <-> id map with occurrence counts. Ids are dense
// 0..|V|-1, assigned by descending count with lexicographic tiebreak.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Builds from exact counts, keeping words with count >= threshold.
  // Throws std::runtime_error if nothing survives.
  static Vocabulary from_counts(
      const std::unordered_map<std::string, std::int64_t>& counts,
      std::int64_t threshold);

  // Preserves the given entry order (caller guarantees uniqueness).
  static Vocabulary from_entries(std::vector<VocabEntry> entries);

  int id(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  const std::string& word(int id) const { return entries_[id].word; }
  std::int64_t count(int id) const { return entries_[id].count; }
  std::size_t size() const { return entries_.size(); }
  std::int64_t total_count() const { return total_count_; }
  const std::vector<VocabEntry>& entries() const { return entries_; }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int> index_;
  std::int64_t total_count_ = 0;
};

}  // namespace lscd
