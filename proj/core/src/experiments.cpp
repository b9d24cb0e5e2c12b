#include "lscd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lscd/io.hpp"
#include "lscd/random.hpp"

namespace lscd {

namespace {

// average ranks (1-based), ties share the mean of their positions
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw std::invalid_argument(
        "correlation undefined: an input has zero rank variance");
  }
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("spearman needs equal-length inputs");
  }
  if (a.size() < 3) {
    throw std::invalid_argument("spearman needs at least 3 observations");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

double spearman(const ChangeScores& pred, const TargetSet& gold,
                std::vector<std::pair<std::string, std::string>>* excluded) {
  std::vector<double> x, y;
  std::vector<std::string> missing;
  for (const auto& t : gold.targets) {
    if (!t.gold_graded) continue;
    auto it = std::find_if(pred.entries.begin(), pred.entries.end(),
                           [&](const ScoreEntry& e) { return e.word == t.word; });
    if (it == pred.entries.end()) {
      missing.push_back(t.word);
      if (excluded) excluded->emplace_back(t.word, "no predicted score");
      continue;
    }
    x.push_back(it->score);
    y.push_back(*t.gold_graded);
  }
  if (x.size() < 3) {
    std::string msg = "spearman needs >= 3 overlapping graded words, have " +
                      std::to_string(x.size());
    if (!missing.empty()) {
      msg += "; missing predictions for:";
      for (const auto& w : missing) msg += " " + w;
    }
    throw std::runtime_error(msg);
  }
  return spearman(x, y);
}

double accuracy(const BinaryLabels& pred, const TargetSet& gold,
                std::vector<std::pair<std::string, std::string>>* excluded) {
  int n = 0, hits = 0;
  for (const auto& t : gold.targets) {
    if (!t.gold_binary) continue;
    auto it = std::find_if(pred.entries.begin(), pred.entries.end(),
                           [&](const auto& e) { return e.first == t.word; });
    if (it == pred.entries.end()) {
      if (excluded) excluded->emplace_back(t.word, "no predicted label");
      continue;
    }
    ++n;
    if (it->second == *t.gold_binary) ++hits;
  }
  if (n == 0) {
    throw std::runtime_error("accuracy: no overlap between prediction and gold");
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double freq_bias(const ChangeScores& pred, const Corpus& corpus2,
                 const TargetSet& targets) {
  std::vector<double> scores, freqs;
  for (const auto& t : targets.targets) {
    auto it = std::find_if(pred.entries.begin(), pred.entries.end(),
                           [&](const ScoreEntry& e) { return e.word == t.word; });
    if (it == pred.entries.end()) continue;
    const int id = corpus2.vocab.id(t.word);
    if (id < 0) continue;
    scores.push_back(it->score);
    freqs.push_back(static_cast<double>(corpus2.vocab.count(id)));
  }
  if (scores.size() < 3) {
    throw std::runtime_error(
        "frequency bias needs >= 3 targets resolvable in corpus2");
  }
  return spearman(scores, freqs);
}

double permutation_null_quantile(int n, double quantile, int permutations,
                                 std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("need n >= 3");
  if (quantile <= 0.0 || quantile >= 1.0) {
    throw std::invalid_argument("quantile must be in (0,1)");
  }
  std::vector<double> base(n);
  std::iota(base.begin(), base.end(), 0.0);
  std::vector<double> shuffled = base;
  Rng rng(seed);
  std::vector<double> stats(permutations);
  for (int p = 0; p < permutations; ++p) {
    rng.shuffle(shuffled);
    stats[p] = std::abs(spearman(base, shuffled));
  }
  std::sort(stats.begin(), stats.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil(quantile * permutations)) - 1;
  return stats[std::min(idx, stats.size() - 1)];
}

void SweepSpec::resolve_seeds() {
  if (static_cast<int>(seeds.size()) == runs) return;
  if (!seeds.empty()) {
    throw std::invalid_argument("seeds list length must equal runs");
  }
  seeds.resize(runs);
  for (int i = 0; i < runs; ++i) seeds[i] = base_seed + static_cast<std::uint64_t>(i);
}

void SweepResult::recompute_aggregates() {
  aggregates.clear();
  auto fold = [&](int dim, const std::string& metric, std::optional<double> v) {
    if (!v) return;
    auto& agg = aggregates[{dim, metric}];
    if (agg.n == 0) {
      agg.mean = agg.min = agg.max = *v;
    } else {
      agg.mean += *v;
      agg.min = std::min(agg.min, *v);
      agg.max = std::max(agg.max, *v);
    }
    ++agg.n;
  };
  for (const auto& cell : cells) {
    fold(cell.dim, "spearman", cell.spearman);
    fold(cell.dim, "accuracy", cell.accuracy);
    fold(cell.dim, "freq_bias", cell.freq_bias);
  }
  for (auto& [key, agg] : aggregates) {
    (void)key;
    agg.mean /= agg.n;
  }
}

namespace {

SweepCell run_cell(const SweepSpec& spec, int dim, int run,
                   const Corpus& corpus1, const Corpus& corpus2,
                   const TargetSet& targets) {
  SweepCell cell;
  cell.dim = dim;
  cell.run = run;
  cell.seed = spec.seeds[run];
  const auto start = std::chrono::steady_clock::now();
  try {
    TrainingConfig config = spec.config;
    config.dim = dim;
    config.seed = cell.seed;

    AlignedSpaces spaces;
    switch (spec.method) {
      case AlignMethod::VI:
        spaces = align_vi(corpus1, corpus2, config, spec.order,
                          spec.init_context);
        break;
      case AlignMethod::OP: {
        EmbeddingModel m1 = train(corpus1, config);
        TrainingConfig config2 = config;
        config2.seed = derive_seed(config.seed, 0x20);
        EmbeddingModel m2 = train(corpus2, config2);
        spaces = align_op(m1, m2);
        break;
      }
      case AlignMethod::WI: {
        InjectedCorpus joint =
            inject_targets(corpus1, corpus2, targets,
                           InjectScheme::WordInjection, config.seed);
        spaces = align_wi(joint, config, targets);
        break;
      }
      case AlignMethod::VI_OP:
        spaces = align_vi_then_op(align_vi(corpus1, corpus2, config,
                                           spec.order, spec.init_context));
        break;
    }

    const ChangeScores cd = score_targets(spaces, targets, Measure::CD);
    cell.spearman = spearman(cd, targets);
    cell.freq_bias = freq_bias(cd, corpus2, targets);
    const ChangeScores lnd_scores =
        score_targets(spaces, targets, Measure::LND, spec.lnd_k);
    cell.accuracy = accuracy(median_split(lnd_scores), targets);
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.wallclock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return cell;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec_in, const Corpus& corpus1,
                      const Corpus& corpus2, const TargetSet& targets,
                      int jobs,
                      const std::function<void(const SweepCell&)>& on_cell) {
  SweepSpec spec = spec_in;
  if (spec.dims.empty()) throw std::invalid_argument("sweep needs dims");
  if (spec.runs < 1) throw std::invalid_argument("sweep needs runs >= 1");
  spec.resolve_seeds();

  std::vector<std::pair<int, int>> jobs_list;  // (dim, run)
  for (int dim : spec.dims) {
    for (int run = 0; run < spec.runs; ++run) jobs_list.emplace_back(dim, run);
  }

  SweepResult result;
  result.cells.resize(jobs_list.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;

  auto drain = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs_list.size()) break;
      const auto [dim, run] = jobs_list[i];
      SweepCell cell = run_cell(spec, dim, run, corpus1, corpus2, targets);
      if (on_cell) {
        std::lock_guard<std::mutex> lock(report_mutex);
        on_cell(cell);
      }
      result.cells[i] = std::move(cell);
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, jobs_list.size()));
  if (workers == 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  result.recompute_aggregates();
  return result;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

SweepSpec load_sweep_spec(const std::string& path) {
  const auto kv = read_key_value_file(path);
  auto require = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::runtime_error(path + ": sweep spec must set " + key);
    }
    return it->second;
  };

  SweepSpec spec;
  const std::string method = require("method");
  if (method == "vi") spec.method = AlignMethod::VI;
  else if (method == "op") spec.method = AlignMethod::OP;
  else if (method == "wi") spec.method = AlignMethod::WI;
  else if (method == "vi+op") spec.method = AlignMethod::VI_OP;
  else throw std::runtime_error(path + ": unknown method " + method);

  spec.dims.clear();
  for (const auto& d : split_list(require("dims"))) {
    spec.dims.push_back(std::stoi(d));
  }
  spec.runs = std::stoi(require("runs"));
  spec.config.epochs = std::stoi(require("epochs"));

  if (auto it = kv.find("order"); it != kv.end()) {
    spec.order = it->second == "bwd" ? TrainOrder::Backward : TrainOrder::Forward;
  }
  if (auto it = kv.find("init_context"); it != kv.end()) {
    spec.init_context = it->second == "1" || it->second == "true";
  }
  if (auto it = kv.find("window"); it != kv.end()) spec.config.window = std::stoi(it->second);
  if (auto it = kv.find("negatives"); it != kv.end()) spec.config.negatives = std::stoi(it->second);
  if (auto it = kv.find("lr"); it != kv.end()) spec.config.learning_rate = std::stod(it->second);
  if (auto it = kv.find("unigram_exponent"); it != kv.end()) {
    spec.config.unigram_exponent = std::stod(it->second);
  }
  if (auto it = kv.find("threads"); it != kv.end()) spec.config.threads = std::stoi(it->second);
  if (auto it = kv.find("lnd_k"); it != kv.end()) spec.lnd_k = std::stoi(it->second);
  if (auto it = kv.find("base_seed"); it != kv.end()) spec.base_seed = std::stoull(it->second);
  if (auto it = kv.find("seeds"); it != kv.end()) {
    for (const auto& s : split_list(it->second)) spec.seeds.push_back(std::stoull(s));
  }
  spec.resolve_seeds();
  return spec;
}

namespace {

std::string metric_or_na(const std::optional<double>& v) {
  return v ? format_fixed(*v) : "NA";
}

}  // namespace

void write_sweep_cells_csv(const SweepResult& result, const SweepSpec& spec,
                           const std::string& path) {
  LineWriter out(path);
  out.write_line(
      "method,order,dim,run,seed,epochs,spearman,accuracy,freq_bias,"
      "wallclock_s");
  std::vector<const SweepCell*> cells;
  cells.reserve(result.cells.size());
  for (const auto& c : result.cells) cells.push_back(&c);
  std::sort(cells.begin(), cells.end(), [](const SweepCell* a, const SweepCell* b) {
    return std::tie(a->dim, a->run) < std::tie(b->dim, b->run);
  });
  for (const auto* c : cells) {
    out.write_line(to_string(spec.method) + "," + to_string(spec.order) + "," +
                   std::to_string(c->dim) + "," + std::to_string(c->run) + "," +
                   std::to_string(c->seed) + "," +
                   std::to_string(spec.config.epochs) + "," +
                   metric_or_na(c->spearman) + "," + metric_or_na(c->accuracy) +
                   "," + metric_or_na(c->freq_bias) + "," +
                   format_fixed(c->wallclock_s, 3));
  }
}

void write_sweep_aggregates_csv(const SweepResult& result,
                                const std::string& path) {
  LineWriter out(path);
  out.write_line("dim,metric,mean,min,max");
  for (const auto& [key, agg] : result.aggregates) {
    out.write_line(std::to_string(key.first) + "," + key.second + "," +
                   format_fixed(agg.mean) + "," + format_fixed(agg.min) + "," +
                   format_fixed(agg.max));
  }
}

}  // namespace lscd
