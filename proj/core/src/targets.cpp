#include "lscd/targets.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "lscd/io.hpp"

namespace lscd {

bool TargetSet::contains(const std::string& word) const {
  return find(word) != nullptr;
}

const Target* TargetSet::find(const std::string& word) const {
  for (const auto& t : targets) {
    if (t.word == word) return &t;
  }
  return nullptr;
}

std::vector<std::string> TargetSet::words() const {
  std::vector<std::string> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(t.word);
  return out;
}

TargetSet load_targets(const std::string& path) {
  LineReader reader(path);
  TargetSet set;
  std::unordered_set<std::string> seen;
  std::string line;
  while (reader.next_line(line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    Target t;
    t.word = cols[0];
    if (t.word.empty()) {
      throw std::runtime_error(path + ": empty target word at line " +
                               std::to_string(reader.line_number()));
    }
    if (!seen.insert(t.word).second) {
      throw std::runtime_error(path + ": duplicate target word: " + t.word);
    }
    if (cols.size() > 1 && !cols[1].empty()) {
      if (cols[1] != "0" && cols[1] != "1") {
        throw std::runtime_error(path + ": binary label must be 0 or 1 at line " +
                                 std::to_string(reader.line_number()));
      }
      t.gold_binary = cols[1] == "1" ? 1 : 0;
    }
    if (cols.size() > 2 && !cols[2].empty()) {
      double v;
      try {
        v = std::stod(cols[2]);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad graded value at line " +
                                 std::to_string(reader.line_number()));
      }
      if (!std::isfinite(v)) {
        throw std::runtime_error(path + ": graded value must be finite at line " +
                                 std::to_string(reader.line_number()));
      }
      t.gold_graded = v;
    }
    set.targets.push_back(std::move(t));
  }
  if (set.targets.empty()) throw std::runtime_error("empty target file: " + path);
  return set;
}

}  // namespace lscd
