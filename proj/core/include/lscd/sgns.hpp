#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lscd/corpus.hpp"
#include "lscd/random.hpp"
#include "lscd/vocabulary.hpp"

namespace lscd {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TrainingConfig {
  int dim = 300;
  int window = 10;
  int negatives = 5;
  double learning_rate = 0.025;
  int epochs = 5;
  std::optional<double> subsample_threshold;  // absent = off
  double unigram_exponent = 1.0;
  bool shrink_window = false;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Word and context vectors over a vocabulary; row i of either matrix
// belongs to vocab id i.
struct EmbeddingModel {
  Vocabulary vocab;
  Matrix word_vectors;
  Matrix context_vectors;
  TrainingConfig config;
  std::string corpus_label;

  int dim() const { return static_cast<int>(word_vectors.cols()); }
};

struct InitSpec {
  enum class Mode { Random, FromModel };
  Mode mode = Mode::Random;
  const EmbeddingModel* prior = nullptr;
  bool init_context = true;

  static InitSpec random() { return {}; }
  static InitSpec from_model(const EmbeddingModel& prior,
                             bool init_context = true) {
    return {Mode::FromModel, &prior, init_context};
  }
};

double sigmoid(double x);

// Emits (word, context) pairs for every position and offset 1..window
// within sentence bounds. With an untag map (temporal referencing) the
// context slot is rewritten to the untagged id.
template <typename F>
void for_each_pair(std::span<const int> sentence, int window,
                   const std::unordered_map<int, int>* untag, F&& emit) {
  const int n = static_cast<int>(sentence.size());
  for (int i = 0; i < n; ++i) {
    int lo = i - window < 0 ? 0 : i - window;
    int hi = i + window >= n ? n - 1 : i + window;
    for (int j = lo; j <= hi; ++j) {
      if (j == i) continue;
      int context = sentence[j];
      if (untag) {
        auto it = untag->find(context);
        if (it != untag->end()) context = it->second;
      }
      emit(sentence[i], context);
    }
  }
}

std::vector<std::pair<int, int>> extract_pairs(
    const Corpus& corpus, int window,
    const std::unordered_map<int, int>* untag = nullptr);

inline std::int64_t count_pairs_in_sentence(std::span<const int> sentence,
                                            int window) {
  const std::int64_t n = static_cast<std::int64_t>(sentence.size());
  std::int64_t total = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    total += std::min<std::int64_t>(i, window) +
             std::min<std::int64_t>(n - 1 - i, window);
  }
  return total;
}

std::int64_t count_pairs(const Corpus& corpus, int window);

// Alias-method sampler over exact normalized weights.
class NoiseTable {
 public:
  explicit NoiseTable(const std::vector<double>& weights);
  int sample(Rng& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

// Noise weights count(w)^exponent; for temporal referencing, tagged
// forms never occur in the context slot and get weight zero while the
// untagged forms carry the combined mass.
std::vector<double> noise_weights(const Vocabulary& vocab, double exponent,
                                  const std::unordered_map<int, int>* untag = nullptr);

// One stochastic-gradient update for a (word, context) pair plus its
// negative samples. All gradients are evaluated at the pre-update
// vectors, so the applied step is the exact gradient of the per-pair
// objective term.
void sgd_step(Matrix& word_vectors, Matrix& context_vectors, int word,
              int context, std::span<const int> negatives, double lr);

// Mean per-pair loss (negated objective term) over given pairs with
// fixed negative draws; used to track training progress.
double mean_pair_loss(const EmbeddingModel& model,
                      std::span<const std::pair<int, int>> pairs,
                      std::span<const int> negatives, int k);

// Full training: epochs passes over the pair stream, learning rate
// decaying linearly from the initial rate to 1e-4 of it across all
// planned updates. FromModel seeds shared-vocabulary rows from the
// prior; words absent from the corpus keep their prior rows untouched
// and new words are random-initialized.
EmbeddingModel train(const Corpus& corpus, const TrainingConfig& config,
                     const InitSpec& init = {},
                     const std::unordered_map<int, int>* untag = nullptr);

// Embedding text files: header `|V| d`, one `word v1 .. vd` line per
// word, 6-decimal fixed values. The context matrix goes to a sibling
// file with a `.ctx` suffix.
void save_embedding(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_embedding(const std::string& path);

}  // namespace lscd
