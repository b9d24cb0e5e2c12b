#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "lscd/align.hpp"
#include "lscd/targets.hpp"

namespace lscd {

enum class Measure { CD, LND };

std::string to_string(Measure m);

struct ScoreEntry {
  std::string word;
  double score;
};

struct ChangeScores {
  std::vector<ScoreEntry> entries;
  Measure measure = Measure::CD;
  // targets that could not be scored, with reasons
  std::vector<std::pair<std::string, std::string>> excluded;
};

struct BinaryLabels {
  std::vector<std::pair<std::string, int>> entries;
};

// 1 - x.y / (|x| |y|). Throws on a zero vector, naming the argument.
double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y);

// Local neighborhood distance: cosine distance between the word's
// similarity profiles to the union of its k nearest neighbors in each
// space. Neighbors come from the shared vocabulary, excluding the word
// itself; the union is ordered lexicographically in both profiles.
double lnd(const std::string& word, const AlignedSpaces& spaces, int k = 25);

ChangeScores score_targets(const AlignedSpaces& spaces,
                           const TargetSet& targets, Measure measure,
                           int lnd_k = 25);

// Sorts descending by (score, word) and labels the top floor(n/2)
// entries 1 (change), the rest 0.
BinaryLabels median_split(const ChangeScores& scores);

// TSV `word<TAB>score` / `word<TAB>label`, matching the answer-file
// shape (one word per line).
void save_scores(const ChangeScores& scores, const std::string& path);
ChangeScores load_scores(const std::string& path);
void save_labels(const BinaryLabels& labels, const std::string& path);
BinaryLabels load_labels(const std::string& path);

}  // namespace lscd
