#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lscd/align.hpp"
#include "lscd/corpus.hpp"
#include "lscd/measures.hpp"
#include "lscd/sgns.hpp"
#include "lscd/targets.hpp"

namespace lscd {

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

struct EvalReport {
  std::optional<double> spearman;
  int spearman_n = 0;
  std::optional<double> accuracy;
  int accuracy_n = 0;
  std::vector<std::pair<std::string, std::string>> excluded;
};

// Spearman between predicted scores and graded gold on the overlap.
// Throws if fewer than 3 overlapping words carry graded gold.
double spearman(const ChangeScores& pred, const TargetSet& gold,
                std::vector<std::pair<std::string, std::string>>* excluded = nullptr);

// Fraction of matching binary labels on the overlap.
double accuracy(const BinaryLabels& pred, const TargetSet& gold,
                std::vector<std::pair<std::string, std::string>>* excluded = nullptr);

// Spearman between predicted scores and the targets' frequencies in
// corpus2's vocabulary.
double freq_bias(const ChangeScores& pred, const Corpus& corpus2,
                 const TargetSet& targets);

// Quantile of |spearman| under the permutation null for sample size n.
double permutation_null_quantile(int n, double quantile, int permutations,
                                 std::uint64_t seed);

struct SweepSpec {
  std::vector<int> dims = {5,   10,  25,  50,  80,  150, 200,
                           250, 300, 350, 500, 750, 1000};
  int runs = 5;
  std::vector<std::uint64_t> seeds;  // length runs; filled from base_seed if empty
  std::uint64_t base_seed = 1;
  AlignMethod method = AlignMethod::VI;
  TrainOrder order = TrainOrder::Forward;
  bool init_context = true;
  TrainingConfig config;  // dim and seed are overridden per cell
  int lnd_k = 25;

  void resolve_seeds();
};

struct SweepCell {
  int dim = 0;
  int run = 0;
  std::uint64_t seed = 0;
  std::optional<double> spearman;
  std::optional<double> accuracy;
  std::optional<double> freq_bias;
  double wallclock_s = 0.0;
  std::string error;  // empty on success
};

struct DimAggregate {
  double mean = 0.0, min = 0.0, max = 0.0;
  int n = 0;  // effective sample size (failed cells skipped)
};

struct SweepResult {
  std::vector<SweepCell> cells;
  // (dim, metric) -> aggregate; metrics: spearman, accuracy, freq_bias
  std::map<std::pair<int, std::string>, DimAggregate> aggregates;

  void recompute_aggregates();
};

// One aligned-space build + scoring + evaluation per (dim, run) cell.
// CD scores feed the ranking metric and the frequency bias, LND with
// median split feeds accuracy. Cell failures are recorded and the sweep
// continues. jobs > 1 runs cells concurrently.
SweepResult run_sweep(const SweepSpec& spec, const Corpus& corpus1,
                      const Corpus& corpus2, const TargetSet& targets,
                      int jobs = 1,
                      const std::function<void(const SweepCell&)>& on_cell = {});

// Reads a sweep spec from a flat key=value file. Required keys:
// method, dims, runs, epochs; optional: order, dim-independent
// hyperparameters, base_seed, seeds.
SweepSpec load_sweep_spec(const std::string& path);

// CSV `method,order,dim,run,seed,epochs,spearman,accuracy,freq_bias,
// wallclock_s`; failed metrics are written as NA.
void write_sweep_cells_csv(const SweepResult& result, const SweepSpec& spec,
                           const std::string& path);
// CSV `dim,metric,mean,min,max` over the non-failed cells.
void write_sweep_aggregates_csv(const SweepResult& result,
                                const std::string& path);

}  // namespace lscd
