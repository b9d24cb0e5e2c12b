#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lscd/corpus.hpp"
#include "lscd/targets.hpp"

namespace lscd {

// Controls how a changed target's contexts move between the corpora:
// in corpus2 a changed target draws each context from its second topic
// pool with probability swap_fraction (spread per target between min
// and max), from the first pool otherwise. Stable targets keep the
// first pool in both corpora.
struct ChangeModel {
  double swap_min = 1.0;
  double swap_max = 1.0;
  double background_mix = 0.2;  // share of context slots filled from background
};

struct FrequencyPlan {
  enum class Kind { Fixed, LogSpread };
  Kind kind = Kind::Fixed;
  int fixed = 200;
  int spread_min = 20;
  int spread_max = 2000;
};

struct SyntheticSpec {
  int vocab_size = 2000;        // background words
  int topic_words = 50;         // per topic pool
  std::int64_t sentences = 20000;  // background-only sentences per corpus
  int sentence_length = 12;
  int context_per_side = 5;     // topic tokens around each target occurrence
  int n_stable_targets = 10;
  int n_changed_targets = 10;
  FrequencyPlan frequency;
  ChangeModel change;
  std::uint64_t seed = 1;
};

struct SyntheticPair {
  Corpus corpus1;
  Corpus corpus2;
  TargetSet targets;  // gold binary = changed flag, gold graded = designed divergence
};

// Two corpora over a shared background vocabulary with planted stable
// and changed targets at exactly the requested frequencies. Regenerating
// with the same spec is byte-identical.
SyntheticPair gen_synthetic_pair(const SyntheticSpec& spec);

// The per-target frequencies a log-spread plan assigns (shared with the
// generator so diagnostics can reference the designed values).
std::vector<int> log_spread_frequencies(int n, int fmin, int fmax);

SyntheticSpec load_synthetic_spec(const std::string& path);

}  // namespace lscd
