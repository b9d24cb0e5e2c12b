#include "lscd/sgns.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lscd/io.hpp"

namespace lscd {

double sigmoid(double x) {
  // split on sign so exp never overflows
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<std::pair<int, int>> extract_pairs(
    const Corpus& corpus, int window,
    const std::unordered_map<int, int>* untag) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& sentence : corpus.sentences) {
    for_each_pair(std::span<const int>(sentence), window, untag,
                  [&](int w, int c) { pairs.emplace_back(w, c); });
  }
  return pairs;
}

std::int64_t count_pairs(const Corpus& corpus, int window) {
  std::int64_t total = 0;
  for (const auto& sentence : corpus.sentences) {
    total += count_pairs_in_sentence(sentence, window);
  }
  return total;
}

NoiseTable::NoiseTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("empty noise distribution");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0 || !std::isfinite(w)) {
      throw std::invalid_argument("noise weights must be finite and >= 0");
    }
    sum += w;
  }
  if (sum <= 0) throw std::invalid_argument("noise distribution has zero mass");

  // Vose alias construction over exact normalized weights.
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<int> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] / sum * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));
  }
  while (!small.empty() && !large.empty()) {
    int s = small.back();
    int l = large.back();
    small.pop_back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (int i : large) prob_[i] = 1.0;
  for (int i : small) prob_[i] = 1.0;
}

int NoiseTable::sample(Rng& rng) const {
  const std::size_t i = rng.uniform_index(prob_.size());
  return rng.uniform() < prob_[i] ? static_cast<int>(i) : alias_[i];
}

std::vector<double> noise_weights(const Vocabulary& vocab, double exponent,
                                  const std::unordered_map<int, int>* untag) {
  std::vector<double> weights(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(vocab.count(static_cast<int>(i))),
                          exponent);
  }
  if (untag) {
    // tagged forms never occur in the context slot
    for (const auto& [tagged, plain] : *untag) {
      (void)plain;
      weights[tagged] = 0.0;
    }
  }
  return weights;
}

namespace {

struct StepBuffers {
  Eigen::RowVectorXd word_old;
  Eigen::RowVectorXd word_delta;
  std::vector<double> neg_coef;
};

inline void sgd_step_impl(Matrix& word_vectors, Matrix& context_vectors,
                          int word, int context, std::span<const int> negatives,
                          double lr, StepBuffers& buf) {
  buf.word_old = word_vectors.row(word);

  // all gradients evaluated before any vector moves
  const double g_pos = sigmoid(buf.word_old.dot(context_vectors.row(context)));
  const double coef_pos = lr * (1.0 - g_pos);
  buf.neg_coef.resize(negatives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const double g = sigmoid(buf.word_old.dot(context_vectors.row(negatives[i])));
    buf.neg_coef[i] = -lr * g;
  }

  buf.word_delta = coef_pos * context_vectors.row(context);
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    buf.word_delta += buf.neg_coef[i] * context_vectors.row(negatives[i]);
  }
  context_vectors.row(context) += coef_pos * buf.word_old;
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    context_vectors.row(negatives[i]) += buf.neg_coef[i] * buf.word_old;
  }
  word_vectors.row(word) += buf.word_delta;
}

}  // namespace

void sgd_step(Matrix& word_vectors, Matrix& context_vectors, int word,
              int context, std::span<const int> negatives, double lr) {
  static thread_local StepBuffers buf;
  sgd_step_impl(word_vectors, context_vectors, word, context, negatives, lr,
                buf);
}

double mean_pair_loss(const EmbeddingModel& model,
                      std::span<const std::pair<int, int>> pairs,
                      std::span<const int> negatives, int k) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  if (negatives.size() != pairs.size() * static_cast<std::size_t>(k)) {
    throw std::invalid_argument("negatives must hold k draws per pair");
  }
  double total = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [w, c] = pairs[p];
    double loss =
        -std::log(sigmoid(model.word_vectors.row(w).dot(model.context_vectors.row(c))));
    for (int i = 0; i < k; ++i) {
      const int n = negatives[p * k + i];
      loss -= std::log(
          sigmoid(-model.word_vectors.row(w).dot(model.context_vectors.row(n))));
    }
    total += loss;
  }
  return total / static_cast<double>(pairs.size());
}

namespace {

// keep probability from the classic subsampling schedule
inline double keep_probability(std::int64_t count, std::int64_t total,
                               double threshold) {
  const double r = static_cast<double>(count) /
                   (threshold * static_cast<double>(total));
  const double p = (std::sqrt(r) + 1.0) / r;
  return p < 1.0 ? p : 1.0;
}

struct TrainShard {
  std::size_t begin = 0, end = 0;
};

}  // namespace

EmbeddingModel train(const Corpus& corpus, const TrainingConfig& config,
                     const InitSpec& init,
                     const std::unordered_map<int, int>* untag) {
  if (config.dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (corpus.sentences.empty()) throw std::runtime_error("cannot train on an empty corpus");
  if (init.mode == InitSpec::Mode::FromModel) {
    if (!init.prior) throw std::invalid_argument("FromModel needs a prior model");
    if (init.prior->dim() != config.dim) {
      throw std::invalid_argument(
          "prior dimensionality " + std::to_string(init.prior->dim()) +
          " does not match configured dim " + std::to_string(config.dim));
    }
  }
  const std::int64_t pairs_per_epoch = count_pairs(corpus, config.window);
  if (pairs_per_epoch == 0 && config.epochs > 0) {
    throw std::runtime_error("pair stream is empty: no sentence has two tokens");
  }

  EmbeddingModel model;
  model.config = config;
  model.corpus_label = corpus.label;

  // FromModel keeps prior-only words as extra untrained rows.
  std::vector<VocabEntry> entries = corpus.vocab.entries();
  const int corpus_vocab_size = static_cast<int>(entries.size());
  if (init.mode == InitSpec::Mode::FromModel) {
    for (const auto& e : init.prior->vocab.entries()) {
      if (!corpus.vocab.contains(e.word)) entries.push_back(e);
    }
  }
  model.vocab = Vocabulary::from_entries(std::move(entries));
  const int rows = static_cast<int>(model.vocab.size());

  model.word_vectors.resize(rows, config.dim);
  model.context_vectors = Matrix::Zero(rows, config.dim);
  {
    Rng init_rng(derive_seed(config.seed, 1));
    const double scale = 0.5 / static_cast<double>(config.dim);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < config.dim; ++j) {
        model.word_vectors(i, j) = (2.0 * init_rng.uniform() - 1.0) * scale;
      }
    }
  }
  if (init.mode == InitSpec::Mode::FromModel) {
    const auto& prior = *init.prior;
    for (std::size_t p = 0; p < prior.vocab.size(); ++p) {
      const int row = model.vocab.id(prior.vocab.word(static_cast<int>(p)));
      model.word_vectors.row(row) = prior.word_vectors.row(static_cast<int>(p));
      if (init.init_context) {
        model.context_vectors.row(row) =
            prior.context_vectors.row(static_cast<int>(p));
      }
    }
  }
  if (config.epochs == 0) return model;

  NoiseTable noise(noise_weights(corpus.vocab, config.unigram_exponent, untag));

  const double lr0 = config.learning_rate;
  const double lr_min = lr0 * 1e-4;
  const double total_updates =
      static_cast<double>(pairs_per_epoch) * config.epochs;
  std::atomic<std::int64_t> processed{0};

  const int threads = std::max(1, config.threads);
  std::vector<TrainShard> shards(threads);
  for (int t = 0; t < threads; ++t) {
    shards[t].begin = corpus.sentences.size() * t / threads;
    shards[t].end = corpus.sentences.size() * (t + 1) / threads;
  }

  auto worker = [&](int worker_id) {
    Rng rng(derive_seed(config.seed, 2 + static_cast<std::uint64_t>(worker_id)));
    StepBuffers buf;
    std::vector<int> negatives(config.negatives);
    std::vector<int> effective;
    const auto shard = shards[worker_id];
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      for (std::size_t s = shard.begin; s < shard.end; ++s) {
        const auto& sentence = corpus.sentences[s];

        std::span<const int> tokens(sentence);
        if (config.subsample_threshold) {
          effective.clear();
          for (int id : sentence) {
            const double keep =
                keep_probability(corpus.vocab.count(id),
                                 corpus.vocab.total_count(),
                                 *config.subsample_threshold);
            if (rng.uniform() < keep) effective.push_back(id);
          }
          tokens = effective;
        }

        int window = config.window;
        if (config.shrink_window) {
          window = 1 + static_cast<int>(
                           rng.uniform_index(static_cast<std::uint64_t>(config.window)));
        }

        const std::int64_t base = processed.fetch_add(
            count_pairs_in_sentence(tokens, window), std::memory_order_relaxed);
        std::int64_t offset = 0;
        for_each_pair(tokens, window, untag, [&](int w, int c) {
          const double frac =
              static_cast<double>(base + offset) / total_updates;
          const double lr = std::max(lr_min, lr0 * (1.0 - frac));
          ++offset;
          for (int i = 0; i < config.negatives; ++i) {
            negatives[i] = noise.sample(rng);
          }
          sgd_step_impl(model.word_vectors, model.context_vectors, w, c,
                        negatives, lr, buf);
        });
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  return model;
}

void save_embedding(const EmbeddingModel& model, const std::string& path) {
  auto write_matrix = [&](const Matrix& m, const std::string& p) {
    LineWriter out(p);
    std::string line = std::to_string(model.vocab.size()) + " " +
                       std::to_string(m.cols()) + "\n";
    out.write(line);
    for (int i = 0; i < m.rows(); ++i) {
      line = model.vocab.word(i);
      for (int j = 0; j < m.cols(); ++j) {
        line += ' ';
        line += format_fixed(m(i, j));
      }
      line += '\n';
      out.write(line);
    }
  };
  write_matrix(model.word_vectors, path);
  write_matrix(model.context_vectors, path + ".ctx");
}

namespace {

Matrix read_matrix(const std::string& path, std::vector<VocabEntry>* entries) {
  LineReader in(path);
  std::string line;
  if (!in.next_line(line)) throw std::runtime_error("empty embedding file: " + path);
  std::istringstream header(line);
  std::int64_t rows = 0, cols = 0;
  if (!(header >> rows >> cols) || rows < 1 || cols < 1) {
    throw std::runtime_error(path + ": malformed embedding header");
  }
  Matrix m(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    if (!in.next_line(line)) {
      throw std::runtime_error(path + ": expected " + std::to_string(rows) +
                               " rows, got " + std::to_string(i));
    }
    std::istringstream row(line);
    std::string word;
    row >> word;
    if (entries) entries->push_back({word, 0});
    for (std::int64_t j = 0; j < cols; ++j) {
      if (!(row >> m(i, j))) {
        throw std::runtime_error(path + ": short row for word " + word);
      }
    }
  }
  return m;
}

}  // namespace

EmbeddingModel load_embedding(const std::string& path) {
  EmbeddingModel model;
  std::vector<VocabEntry> entries;
  model.word_vectors = read_matrix(path, &entries);
  model.vocab = Vocabulary::from_entries(std::move(entries));
  model.context_vectors = read_matrix(path + ".ctx", nullptr);
  if (model.context_vectors.rows() != model.word_vectors.rows() ||
      model.context_vectors.cols() != model.word_vectors.cols()) {
    throw std::runtime_error(path + ": context matrix shape mismatch");
  }
  model.config.dim = static_cast<int>(model.word_vectors.cols());
  return model;
}

}  // namespace lscd
