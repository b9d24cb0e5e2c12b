#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lscd/targets.hpp"
#include "lscd/vocabulary.hpp"

namespace lscd {

// Tokenized text as sentences of vocabulary ids. Immutable after
// construction; transforms return new corpora.
struct Corpus {
  std::vector<std::vector<int>> sentences;
  Vocabulary vocab;
  std::string label;

  std::int64_t token_count() const {
    std::int64_t n = 0;
    for (const auto& s : sentences) n += static_cast<std::int64_t>(s.size());
    return n;
  }
};

struct CorpusStats {
  std::int64_t tokens = 0;
  std::int64_t types = 0;
  double ttr = 0.0;  // types / tokens * 1000
};

struct FilterStats {
  std::int64_t tokens_dropped = 0;
  std::int64_t sentences_dropped = 0;
};

// Reads a corpus file: UTF-8, one sentence per line, space-separated
// tokens, gzip accepted (sniffed by magic bytes). Blank lines are
// skipped. With a vocabulary, out-of-vocabulary tokens are dropped;
// without one, a provisional full vocabulary (threshold 1) is built.
Corpus load_corpus(const std::string& path, const Vocabulary* vocab = nullptr,
                   const std::string& label = "");

// Words with count >= threshold, ids by descending count then word.
Vocabulary build_vocab(const Corpus& corpus, std::int64_t threshold);
Vocabulary build_vocab(
    const std::unordered_map<std::string, std::int64_t>& counts,
    std::int64_t threshold);

// Drops tokens absent from vocab and removes sentences that become empty.
Corpus filter_corpus(const Corpus& corpus, const Vocabulary& vocab,
                     FilterStats* stats = nullptr);

CorpusStats corpus_stats(const Corpus& corpus);
double type_token_ratio(std::int64_t types, std::int64_t tokens);

// One sentence per line, single-space separators; gzip when the path
// ends in ".gz".
void save_corpus(const Corpus& corpus, const std::string& path);

enum class InjectScheme { WordInjection, TemporalReferencing };

// Joint corpus produced by inject_targets. For WordInjection the tagged
// forms are ordinary vocabulary entries. For TemporalReferencing the
// vocabulary additionally holds the untagged target forms (combined
// counts) and untag_map sends tagged ids to them; pair extraction uses
// it to keep contexts untagged.
struct InjectedCorpus {
  Corpus joint;
  InjectScheme scheme = InjectScheme::WordInjection;
  std::string tag1, tag2;
  std::vector<std::string> usable_targets;   // present in at least one corpus
  std::vector<std::string> missing_targets;  // absent from both, warned
  std::unordered_map<int, int> untag_map;    // tagged id -> untagged id (TR)
};

// Rewrites target occurrences as word+tag1 / word+tag2 by origin and
// shuffles the sentences of both corpora into one joint corpus. Throws
// if a tagged form collides with an existing surface word.
InjectedCorpus inject_targets(const Corpus& corpus1, const Corpus& corpus2,
                              const TargetSet& targets, InjectScheme scheme,
                              std::uint64_t seed,
                              const std::string& tag1 = "_c1",
                              const std::string& tag2 = "_c2");

}  // namespace lscd
