#include "lscd/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lscd/io.hpp"

namespace lscd {

std::string to_string(Measure m) { return m == Measure::CD ? "cd" : "lnd"; }

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cosine distance needs equal-length vectors");
  }
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0) throw std::invalid_argument("cosine distance: first vector is zero");
  if (ny == 0.0) throw std::invalid_argument("cosine distance: second vector is zero");
  return 1.0 - x.dot(y) / (nx * ny);
}

namespace {

struct Neighbor {
  double similarity;
  int shared_index;  // index into spaces.shared_rows
};

// k nearest shared-vocabulary neighbors of `row` by cosine similarity,
// ties broken lexicographically.
std::vector<int> nearest_shared(const AlignedSpaces& spaces, bool in_space1,
                                const std::string& word, int k) {
  const EmbeddingModel& space = in_space1 ? spaces.space1 : spaces.space2;
  const int row = space.vocab.id(word);
  const Eigen::RowVectorXd query = space.word_vectors.row(row);
  const double qnorm = query.norm();
  if (qnorm == 0.0) {
    throw std::runtime_error("zero vector for word: " + word);
  }

  std::vector<Neighbor> candidates;
  candidates.reserve(spaces.shared_rows.size());
  for (std::size_t i = 0; i < spaces.shared_rows.size(); ++i) {
    const int r = in_space1 ? spaces.shared_rows[i].first
                            : spaces.shared_rows[i].second;
    if (space.vocab.word(r) == word) continue;
    const auto v = space.word_vectors.row(r);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    candidates.push_back(
        {query.dot(v) / (qnorm * norm), static_cast<int>(i)});
  }
  if (static_cast<int>(candidates.size()) < k) {
    throw std::runtime_error("neighbor pool smaller than k for word: " + word);
  }
  auto better = [&](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    const int ra = spaces.shared_rows[a.shared_index].first;
    const int rb = spaces.shared_rows[b.shared_index].first;
    return spaces.space1.vocab.word(ra) < spaces.space1.vocab.word(rb);
  };
  std::partial_sort(candidates.begin(), candidates.begin() + k,
                    candidates.end(), better);
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = candidates[i].shared_index;
  return out;
}

}  // namespace

double lnd(const std::string& word, const AlignedSpaces& spaces, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (spaces.space1.vocab.id(word) < 0 || spaces.space2.vocab.id(word) < 0) {
    throw std::runtime_error("word not present in both spaces: " + word);
  }

  std::vector<int> unions = nearest_shared(spaces, true, word, k);
  {
    auto n2 = nearest_shared(spaces, false, word, k);
    unions.insert(unions.end(), n2.begin(), n2.end());
  }
  // canonical lexicographic order of the union, identical in both spaces
  std::sort(unions.begin(), unions.end(), [&](int a, int b) {
    return spaces.space1.vocab.word(spaces.shared_rows[a].first) <
           spaces.space1.vocab.word(spaces.shared_rows[b].first);
  });
  unions.erase(std::unique(unions.begin(), unions.end()), unions.end());

  auto profile = [&](const EmbeddingModel& space, bool first) {
    const Eigen::RowVectorXd query = space.word_vectors.row(space.vocab.id(word));
    Eigen::VectorXd sims(unions.size());
    for (std::size_t i = 0; i < unions.size(); ++i) {
      const int r = first ? spaces.shared_rows[unions[i]].first
                          : spaces.shared_rows[unions[i]].second;
      const auto v = space.word_vectors.row(r);
      sims[static_cast<Eigen::Index>(i)] =
          query.dot(v) / (query.norm() * v.norm());
    }
    return sims;
  };
  return cosine_distance(profile(spaces.space1, true),
                         profile(spaces.space2, false));
}

ChangeScores score_targets(const AlignedSpaces& spaces,
                           const TargetSet& targets, Measure measure,
                           int lnd_k) {
  ChangeScores scores;
  scores.measure = measure;
  for (const auto& t : targets.targets) {
    const int r1 = spaces.space1.vocab.id(t.word);
    const int r2 = spaces.space2.vocab.id(t.word);
    if (r1 < 0 || r2 < 0) {
      scores.excluded.emplace_back(
          t.word, std::string("missing from space") + (r1 < 0 ? "1" : "2"));
      continue;
    }
    try {
      double score;
      if (measure == Measure::CD) {
        score = cosine_distance(spaces.space1.word_vectors.row(r1).transpose(),
                                spaces.space2.word_vectors.row(r2).transpose());
      } else {
        score = lnd(t.word, spaces, lnd_k);
      }
      scores.entries.push_back({t.word, score});
    } catch (const std::exception& e) {
      scores.excluded.emplace_back(t.word, e.what());
    }
  }
  return scores;
}

BinaryLabels median_split(const ChangeScores& scores) {
  if (scores.entries.size() < 2) {
    throw std::invalid_argument("median split needs at least 2 scores");
  }
  std::vector<ScoreEntry> sorted = scores.entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoreEntry& a, const ScoreEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.word < b.word;
            });
  const std::size_t ones = sorted.size() / 2;
  BinaryLabels labels;
  labels.entries.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    labels.entries.emplace_back(sorted[i].word, i < ones ? 1 : 0);
  }
  return labels;
}

void save_scores(const ChangeScores& scores, const std::string& path) {
  LineWriter out(path);
  for (const auto& e : scores.entries) {
    out.write_line(e.word + "\t" + format_fixed(e.score));
  }
}

ChangeScores load_scores(const std::string& path) {
  LineReader in(path);
  ChangeScores scores;
  std::string line;
  while (in.next_line(line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ": expected word<TAB>score at line " +
                               std::to_string(in.line_number()));
    }
    scores.entries.push_back(
        {line.substr(0, tab), std::stod(line.substr(tab + 1))});
  }
  return scores;
}

void save_labels(const BinaryLabels& labels, const std::string& path) {
  LineWriter out(path);
  for (const auto& [word, label] : labels.entries) {
    out.write_line(word + "\t" + std::to_string(label));
  }
}

BinaryLabels load_labels(const std::string& path) {
  LineReader in(path);
  BinaryLabels labels;
  std::string line;
  while (in.next_line(line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ": expected word<TAB>label at line " +
                               std::to_string(in.line_number()));
    }
    const std::string value = line.substr(tab + 1);
    if (value != "0" && value != "1") {
      throw std::runtime_error(path + ": label must be 0 or 1 at line " +
                               std::to_string(in.line_number()));
    }
    labels.entries.emplace_back(line.substr(0, tab), value == "1" ? 1 : 0);
  }
  return labels;
}

}  // namespace lscd
