#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lscd {

struct Target {
  std::string word;
  std::optional<int> gold_binary;      // 0 or 1
  std::optional<double> gold_graded;   // finite real
};

// Evaluation words with optional gold labels. Words are unique.
struct TargetSet {
  std::vector<Target> targets;

  bool contains(const std::string& word) const;
  const Target* find(const std::string& word) const;
  std::vector<std::string> words() const;
};

// TSV `word<TAB>binary<TAB>graded`; trailing columns may be missing or
// empty. Throws on duplicate words, non-{0,1} binary or non-finite
// graded values.
TargetSet load_targets(const std::string& path);
void save_targets(const TargetSet& targets, const std::string& path);

}  // namespace lscd
