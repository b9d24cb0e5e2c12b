#include "lscd/vocabulary.hpp"

#include <algorithm>
#include <stdexcept>

namespace lscd {

Vocabulary Vocabulary::from_counts(
    const std::unordered_map<std::string, std::int64_t>& counts,
    std::int64_t threshold) {
  if (threshold < 1) throw std::invalid_argument("threshold must be >= 1");
  std::vector<VocabEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [word, count] : counts) {
    if (count >= threshold) entries.push_back({word, count});
  }
  if (entries.empty()) {
    throw std::runtime_error("empty vocabulary: no word reaches count " +
                             std::to_string(threshold));
  }
  std::sort(entries.begin(), entries.end(),
            [](const VocabEntry& a, const VocabEntry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.word < b.word;
            });
  return from_entries(std::move(entries));
}

Vocabulary Vocabulary::from_entries(std::vector<VocabEntry> entries) {
  Vocabulary v;
  v.entries_ = std::move(entries);
  v.index_.reserve(v.entries_.size());
  for (std::size_t i = 0; i < v.entries_.size(); ++i) {
    auto [it, inserted] =
        v.index_.emplace(v.entries_[i].word, static_cast<int>(i));
    if (!inserted) {
      throw std::invalid_argument("duplicate vocabulary word: " +
                                  v.entries_[i].word);
    }
    v.total_count_ += v.entries_[i].count;
  }
  return v;
}

}  // namespace lscd
