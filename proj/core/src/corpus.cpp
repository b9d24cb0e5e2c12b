#include "lscd/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "lscd/io.hpp"
#include "lscd/random.hpp"

namespace lscd {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) tokens.emplace_back(line, i, j - i);
    i = j;
  }
  return tokens;
}

}  // namespace

Corpus load_corpus(const std::string& path, const Vocabulary* vocab,
                   const std::string& label) {
  LineReader reader(path);
  Corpus corpus;
  corpus.label = label.empty() ? path : label;

  std::string line;
  if (vocab) {
    corpus.vocab = *vocab;
    while (reader.next_line(line)) {
      std::vector<int> sentence;
      for (const auto& token : split_tokens(line)) {
        int id = vocab->id(token);
        if (id >= 0) sentence.push_back(id);
      }
      if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
    }
  } else {
    std::vector<std::vector<std::string>> raw;
    std::unordered_map<std::string, std::int64_t> counts;
    while (reader.next_line(line)) {
      auto tokens = split_tokens(line);
      if (tokens.empty()) continue;
      for (const auto& t : tokens) ++counts[t];
      raw.push_back(std::move(tokens));
    }
    if (raw.empty()) throw std::runtime_error("empty corpus: " + path);
    corpus.vocab = Vocabulary::from_counts(counts, 1);
    corpus.sentences.reserve(raw.size());
    for (const auto& tokens : raw) {
      std::vector<int> sentence;
      sentence.reserve(tokens.size());
      for (const auto& t : tokens) sentence.push_back(corpus.vocab.id(t));
      corpus.sentences.push_back(std::move(sentence));
    }
  }
  if (corpus.sentences.empty()) throw std::runtime_error("empty corpus: " + path);
  return corpus;
}

Vocabulary build_vocab(
    const std::unordered_map<std::string, std::int64_t>& counts,
    std::int64_t threshold) {
  return Vocabulary::from_counts(counts, threshold);
}

Vocabulary build_vocab(const Corpus& corpus, std::int64_t threshold) {
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& sentence : corpus.sentences) {
    for (int id : sentence) ++counts[corpus.vocab.word(id)];
  }
  return Vocabulary::from_counts(counts, threshold);
}

Corpus filter_corpus(const Corpus& corpus, const Vocabulary& vocab,
                     FilterStats* stats) {
  Corpus out;
  out.label = corpus.label;
  out.vocab = vocab;
  FilterStats local;
  for (const auto& sentence : corpus.sentences) {
    std::vector<int> kept;
    kept.reserve(sentence.size());
    for (int id : sentence) {
      int nid = vocab.id(corpus.vocab.word(id));
      if (nid >= 0) {
        kept.push_back(nid);
      } else {
        ++local.tokens_dropped;
      }
    }
    if (kept.empty()) {
      ++local.sentences_dropped;
    } else {
      out.sentences.push_back(std::move(kept));
    }
  }
  if (stats) *stats = local;
  return out;
}

double type_token_ratio(std::int64_t types, std::int64_t tokens) {
  return static_cast<double>(types) / static_cast<double>(tokens) * 1000.0;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  std::unordered_set<int> seen;
  for (const auto& sentence : corpus.sentences) {
    s.tokens += static_cast<std::int64_t>(sentence.size());
    seen.insert(sentence.begin(), sentence.end());
  }
  if (s.tokens == 0) throw std::runtime_error("empty corpus has no statistics");
  s.types = static_cast<std::int64_t>(seen.size());
  s.ttr = type_token_ratio(s.types, s.tokens);
  return s;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  LineWriter out(path);
  std::string line;
  for (const auto& sentence : corpus.sentences) {
    line.clear();
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) line += ' ';
      line += corpus.vocab.word(sentence[i]);
    }
    line += '\n';
    out.write(line);
  }
}

InjectedCorpus inject_targets(const Corpus& corpus1, const Corpus& corpus2,
                              const TargetSet& targets, InjectScheme scheme,
                              std::uint64_t seed, const std::string& tag1,
                              const std::string& tag2) {
  InjectedCorpus result;
  result.scheme = scheme;
  result.tag1 = tag1;
  result.tag2 = tag2;

  std::unordered_set<std::string> target_words;
  for (const auto& t : targets.targets) target_words.insert(t.word);

  for (const auto& t : targets.targets) {
    bool in1 = corpus1.vocab.contains(t.word);
    bool in2 = corpus2.vocab.contains(t.word);
    if (in1 || in2) {
      result.usable_targets.push_back(t.word);
    } else {
      result.missing_targets.push_back(t.word);
    }
  }

  // Tag, count and remap through surface forms.
  std::unordered_map<std::string, std::int64_t> counts;
  auto tag_collision = [&](const std::string& tagged) {
    if (corpus1.vocab.contains(tagged) || corpus2.vocab.contains(tagged)) {
      throw std::runtime_error("tagged form collides with existing word: " +
                               tagged);
    }
  };
  for (const auto& w : result.usable_targets) {
    tag_collision(w + tag1);
    tag_collision(w + tag2);
  }

  auto surface = [&](const Corpus& c, const std::string& tag, int id) {
    const std::string& w = c.vocab.word(id);
    return target_words.count(w) ? w + tag : w;
  };

  std::vector<std::vector<std::string>> tagged_sentences;
  tagged_sentences.reserve(corpus1.sentences.size() + corpus2.sentences.size());
  for (const auto& sentence : corpus1.sentences) {
    std::vector<std::string> out;
    out.reserve(sentence.size());
    for (int id : sentence) {
      out.push_back(surface(corpus1, tag1, id));
      ++counts[out.back()];
    }
    tagged_sentences.push_back(std::move(out));
  }
  for (const auto& sentence : corpus2.sentences) {
    std::vector<std::string> out;
    out.reserve(sentence.size());
    for (int id : sentence) {
      out.push_back(surface(corpus2, tag2, id));
      ++counts[out.back()];
    }
    tagged_sentences.push_back(std::move(out));
  }

  // Temporal referencing keeps untagged target entries around so that
  // the context slot of extracted pairs can stay untagged.
  if (scheme == InjectScheme::TemporalReferencing) {
    for (const auto& w : result.usable_targets) {
      std::int64_t combined = 0;
      auto it1 = counts.find(w + tag1);
      if (it1 != counts.end()) combined += it1->second;
      auto it2 = counts.find(w + tag2);
      if (it2 != counts.end()) combined += it2->second;
      counts[w] = combined;
    }
  }

  result.joint.label = corpus1.label + "+" + corpus2.label;
  result.joint.vocab = Vocabulary::from_counts(counts, 1);

  result.joint.sentences.reserve(tagged_sentences.size());
  for (const auto& sentence : tagged_sentences) {
    std::vector<int> ids;
    ids.reserve(sentence.size());
    for (const auto& w : sentence) ids.push_back(result.joint.vocab.id(w));
    result.joint.sentences.push_back(std::move(ids));
  }

  Rng rng(derive_seed(seed, 0x5u));
  rng.shuffle(result.joint.sentences);

  if (scheme == InjectScheme::TemporalReferencing) {
    for (const auto& w : result.usable_targets) {
      int plain = result.joint.vocab.id(w);
      int t1 = result.joint.vocab.id(w + tag1);
      int t2 = result.joint.vocab.id(w + tag2);
      if (t1 >= 0) result.untag_map[t1] = plain;
      if (t2 >= 0) result.untag_map[t2] = plain;
    }
  }
  return result;
}

}  // namespace lscd
