#include "lscd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lscd/io.hpp"
#include "lscd/random.hpp"
#include "lscd/sgns.hpp"

namespace lscd {

std::vector<int> log_spread_frequencies(int n, int fmin, int fmax) {
  if (n < 1) throw std::invalid_argument("need at least one frequency");
  if (fmin < 1 || fmax < fmin) {
    throw std::invalid_argument("need 1 <= fmin <= fmax");
  }
  std::vector<int> freqs(n);
  if (n == 1) {
    freqs[0] = fmin;
    return freqs;
  }
  const double lmin = std::log(static_cast<double>(fmin));
  const double lmax = std::log(static_cast<double>(fmax));
  for (int i = 0; i < n; ++i) {
    const double f = std::exp(lmin + (lmax - lmin) * i / (n - 1));
    freqs[i] = static_cast<int>(std::lround(f));
  }
  return freqs;
}

namespace {

std::string numbered(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, i);
  return buf;
}

struct TargetPlan {
  std::string word;
  bool changed = false;
  double swap_fraction = 0.0;  // context mass moved to the second pool in corpus2
  int frequency = 0;           // occurrences per corpus
};

}  // namespace

SyntheticPair gen_synthetic_pair(const SyntheticSpec& spec) {
  if (spec.vocab_size < 2) {
    throw std::invalid_argument("infeasible spec: vocab_size must be >= 2");
  }
  if (spec.topic_words < 1) {
    throw std::invalid_argument("infeasible spec: topic_words must be >= 1");
  }
  if (spec.sentence_length < 2) {
    throw std::invalid_argument("infeasible spec: sentence_length must be >= 2");
  }
  if (spec.context_per_side < 1) {
    throw std::invalid_argument("infeasible spec: context_per_side must be >= 1");
  }
  if (spec.n_stable_targets < 0 || spec.n_changed_targets < 0) {
    throw std::invalid_argument("infeasible spec: negative target count");
  }
  if (spec.sentences < 1) {
    throw std::invalid_argument("infeasible spec: need background sentences");
  }
  if (spec.change.swap_min < 0.0 || spec.change.swap_max > 1.0 ||
      spec.change.swap_min > spec.change.swap_max) {
    throw std::invalid_argument("infeasible spec: swap range must be within [0,1]");
  }
  if (spec.change.background_mix < 0.0 || spec.change.background_mix >= 1.0) {
    throw std::invalid_argument("infeasible spec: background_mix must be in [0,1)");
  }
  if (spec.frequency.kind == FrequencyPlan::Kind::Fixed &&
      spec.frequency.fixed < 1) {
    throw std::invalid_argument("infeasible spec: fixed frequency must be >= 1");
  }

  const int n_targets = spec.n_stable_targets + spec.n_changed_targets;
  Rng rng(derive_seed(spec.seed, 0x51));

  // Interleave stable and changed targets so that the frequency ladder
  // is decorrelated from the change flag.
  std::vector<TargetPlan> plans;
  plans.reserve(n_targets);
  {
    int s = 0, c = 0;
    while (s < spec.n_stable_targets || c < spec.n_changed_targets) {
      if (s < spec.n_stable_targets) {
        plans.push_back({numbered("stable", s), false, 0.0, 0});
        ++s;
      }
      if (c < spec.n_changed_targets) {
        plans.push_back({numbered("changed", c), true, 0.0, 0});
        ++c;
      }
    }
  }
  if (n_targets > 0) {
    std::vector<int> freqs;
    if (spec.frequency.kind == FrequencyPlan::Kind::Fixed) {
      freqs.assign(n_targets, spec.frequency.fixed);
    } else {
      freqs = log_spread_frequencies(n_targets, spec.frequency.spread_min,
                                     spec.frequency.spread_max);
    }
    for (int i = 0; i < n_targets; ++i) plans[i].frequency = freqs[i];
  }
  if (spec.n_changed_targets > 0) {
    // designed divergences, assigned in seeded shuffled order so they do
    // not track the frequency ladder
    std::vector<double> swaps(spec.n_changed_targets);
    for (int i = 0; i < spec.n_changed_targets; ++i) {
      swaps[i] = spec.n_changed_targets == 1
                     ? spec.change.swap_max
                     : spec.change.swap_min +
                           (spec.change.swap_max - spec.change.swap_min) * i /
                               (spec.n_changed_targets - 1);
    }
    rng.shuffle(swaps);
    int next = 0;
    for (auto& plan : plans) {
      if (plan.changed) plan.swap_fraction = swaps[next++];
    }
  }

  // background pool with Zipf weights + two disjoint topic pools
  std::vector<std::string> background(spec.vocab_size);
  std::vector<double> weights(spec.vocab_size);
  for (int i = 0; i < spec.vocab_size; ++i) {
    background[i] = numbered("w", i);
    weights[i] = 1.0 / (i + 1);
  }
  NoiseTable zipf(weights);
  std::vector<std::string> pool_a(spec.topic_words), pool_b(spec.topic_words);
  for (int i = 0; i < spec.topic_words; ++i) {
    pool_a[i] = numbered("ta", i);
    pool_b[i] = numbered("tb", i);
  }

  auto draw_background = [&]() -> const std::string& {
    return background[zipf.sample(rng)];
  };

  auto build_corpus = [&](bool second) {
    std::vector<std::vector<std::string>> sentences;
    sentences.reserve(static_cast<std::size_t>(spec.sentences));
    for (std::int64_t s = 0; s < spec.sentences; ++s) {
      std::vector<std::string> sentence(spec.sentence_length);
      for (auto& tok : sentence) tok = draw_background();
      sentences.push_back(std::move(sentence));
    }
    for (const auto& plan : plans) {
      for (int occ = 0; occ < plan.frequency; ++occ) {
        std::vector<std::string> sentence;
        sentence.reserve(2 * spec.context_per_side + 1);
        auto draw_context = [&]() -> const std::string& {
          if (rng.uniform() < spec.change.background_mix) return draw_background();
          const bool use_second_pool =
              second && plan.changed && rng.uniform() < plan.swap_fraction;
          const auto& pool = use_second_pool ? pool_b : pool_a;
          return pool[rng.uniform_index(pool.size())];
        };
        for (int i = 0; i < spec.context_per_side; ++i) sentence.push_back(draw_context());
        sentence.push_back(plan.word);
        for (int i = 0; i < spec.context_per_side; ++i) sentence.push_back(draw_context());
        sentences.push_back(std::move(sentence));
      }
    }
    rng.shuffle(sentences);

    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& sentence : sentences) {
      for (const auto& tok : sentence) ++counts[tok];
    }
    Corpus corpus;
    corpus.label = second ? "synthetic2" : "synthetic1";
    corpus.vocab = Vocabulary::from_counts(counts, 1);
    corpus.sentences.reserve(sentences.size());
    for (const auto& sentence : sentences) {
      std::vector<int> ids;
      ids.reserve(sentence.size());
      for (const auto& tok : sentence) ids.push_back(corpus.vocab.id(tok));
      corpus.sentences.push_back(std::move(ids));
    }
    return corpus;
  };

  SyntheticPair pair;
  pair.corpus1 = build_corpus(false);
  pair.corpus2 = build_corpus(true);
  for (const auto& plan : plans) {
    Target t;
    t.word = plan.word;
    t.gold_binary = plan.changed ? 1 : 0;
    t.gold_graded = plan.swap_fraction;
    pair.targets.targets.push_back(std::move(t));
  }
  return pair;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  const auto kv = read_key_value_file(path);
  SyntheticSpec spec;
  auto get_int = [&](const char* key, int& out) {
    if (auto it = kv.find(key); it != kv.end()) out = std::stoi(it->second);
  };
  get_int("vocab_size", spec.vocab_size);
  get_int("topic_words", spec.topic_words);
  if (auto it = kv.find("sentences"); it != kv.end()) {
    spec.sentences = std::stoll(it->second);
  }
  get_int("sentence_length", spec.sentence_length);
  get_int("context_per_side", spec.context_per_side);
  get_int("n_stable", spec.n_stable_targets);
  get_int("n_changed", spec.n_changed_targets);
  if (auto it = kv.find("freq_kind"); it != kv.end()) {
    if (it->second == "fixed") spec.frequency.kind = FrequencyPlan::Kind::Fixed;
    else if (it->second == "log_spread") spec.frequency.kind = FrequencyPlan::Kind::LogSpread;
    else throw std::runtime_error(path + ": freq_kind must be fixed or log_spread");
  }
  get_int("freq_fixed", spec.frequency.fixed);
  get_int("freq_min", spec.frequency.spread_min);
  get_int("freq_max", spec.frequency.spread_max);
  if (auto it = kv.find("swap_min"); it != kv.end()) spec.change.swap_min = std::stod(it->second);
  if (auto it = kv.find("swap_max"); it != kv.end()) spec.change.swap_max = std::stod(it->second);
  if (auto it = kv.find("background_mix"); it != kv.end()) {
    spec.change.background_mix = std::stod(it->second);
  }
  if (auto it = kv.find("seed"); it != kv.end()) spec.seed = std::stoull(it->second);
  return spec;
}

}  // namespace lscd
