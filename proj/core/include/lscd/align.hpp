#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lscd/corpus.hpp"
#include "lscd/sgns.hpp"

namespace lscd {

enum class AlignMethod { VI, OP, WI, VI_OP };
enum class TrainOrder { Forward, Backward };

std::string to_string(AlignMethod m);
std::string to_string(TrainOrder o);

// A pair of comparable spaces. space1 always belongs to corpus1 and
// space2 to corpus2, whatever the training order was. shared_rows maps
// each common word to its row in either space.
struct AlignedSpaces {
  EmbeddingModel space1;
  EmbeddingModel space2;
  AlignMethod method = AlignMethod::OP;
  TrainOrder order = TrainOrder::Forward;
  std::vector<std::pair<int, int>> shared_rows;

  std::vector<std::string> shared_words() const;
};

struct ProcrustesSolution {
  Matrix rotation;   // d x d, orthogonal
  double residual;   // Frobenius norm of B*rotation - A
};

// Scales each row to unit Euclidean norm, then shifts each column to
// zero mean. Column means are computed over mean_rows when given
// (alignment restricts them to the shared vocabulary), otherwise over
// all rows. Throws on an all-zero row, naming the word when a
// vocabulary is supplied.
void preprocess(Matrix& m, const Vocabulary* names = nullptr,
                const std::vector<int>* mean_rows = nullptr);

// argmin over orthogonal W of |B W - A|_F via SVD of B^T A.
ProcrustesSolution solve_procrustes(const Matrix& A, const Matrix& B);

// Vector initialization: train on one corpus, then train on the other
// starting from those vectors. Forward order trains corpus1 first.
// epochs_second overrides config.epochs for the second stage when >= 0.
AlignedSpaces align_vi(const Corpus& corpus1, const Corpus& corpus2,
                       const TrainingConfig& config,
                       TrainOrder order = TrainOrder::Forward,
                       bool init_context = true, int epochs_second = -1);

// Orthogonal Procrustes between two independently trained models:
// preprocesses both word-vector matrices, solves on the shared rows and
// rotates all of model2's rows onto model1's space.
AlignedSpaces align_op(const EmbeddingModel& model1,
                       const EmbeddingModel& model2);

// Word injection: one training run on the joint tagged corpus; the
// spaces select the tag1/tag2 rows for targets plus the shared untagged
// rows. Targets lacking either tagged form are dropped with a warning.
AlignedSpaces align_wi(const InjectedCorpus& joint,
                       const TrainingConfig& config, const TargetSet& targets);

// Post-hoc OP applied on top of VI spaces.
AlignedSpaces align_vi_then_op(const AlignedSpaces& spaces);

// Persistence: space1.vec/.ctx, space2.vec/.ctx plus meta.txt with
// method, order, config digest and shared-vocab size.
void save_spaces(const AlignedSpaces& spaces, const std::string& dir,
                 const std::string& config_digest = "");
AlignedSpaces load_spaces(const std::string& dir);

}  // namespace lscd
