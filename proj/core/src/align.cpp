#include "lscd/align.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <unordered_set>

#include "lscd/io.hpp"
#include "lscd/random.hpp"

namespace lscd {

std::string to_string(AlignMethod m) {
  switch (m) {
    case AlignMethod::VI: return "vi";
    case AlignMethod::OP: return "op";
    case AlignMethod::WI: return "wi";
    case AlignMethod::VI_OP: return "vi+op";
  }
  return "?";
}

std::string to_string(TrainOrder o) {
  return o == TrainOrder::Forward ? "fwd" : "bwd";
}

std::vector<std::string> AlignedSpaces::shared_words() const {
  std::vector<std::string> words;
  words.reserve(shared_rows.size());
  for (const auto& [r1, r2] : shared_rows) {
    (void)r2;
    words.push_back(space1.vocab.word(r1));
  }
  return words;
}

namespace {

std::vector<std::pair<int, int>> shared_vocabulary_rows(const Vocabulary& v1,
                                                        const Vocabulary& v2) {
  std::vector<std::pair<int, int>> rows;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    const int j = v2.id(v1.word(static_cast<int>(i)));
    if (j >= 0) rows.emplace_back(static_cast<int>(i), j);
  }
  return rows;
}

}  // namespace

void preprocess(Matrix& m, const Vocabulary* names,
                const std::vector<int>* mean_rows) {
  for (int i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm == 0.0) {
      std::string who = names ? names->word(i) : ("row " + std::to_string(i));
      throw std::runtime_error("cannot length-normalize zero vector: " + who);
    }
    m.row(i) /= norm;
  }
  Eigen::RowVectorXd mean;
  if (mean_rows) {
    if (mean_rows->empty()) throw std::invalid_argument("empty mean-row subset");
    mean = Eigen::RowVectorXd::Zero(m.cols());
    for (int r : *mean_rows) mean += m.row(r);
    mean /= static_cast<double>(mean_rows->size());
  } else {
    mean = m.colwise().mean();
  }
  m.rowwise() -= mean;
}

ProcrustesSolution solve_procrustes(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw std::invalid_argument("procrustes inputs must have identical shape");
  }
  if (!A.allFinite() || !B.allFinite()) {
    throw std::invalid_argument("procrustes inputs must be finite");
  }
  const Eigen::MatrixXd M = B.transpose() * A;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("SVD failed in procrustes solve");
  }
  ProcrustesSolution sol;
  sol.rotation = svd.matrixU() * svd.matrixV().transpose();
  sol.residual = (B * sol.rotation - A).norm();
  return sol;
}

AlignedSpaces align_vi(const Corpus& corpus1, const Corpus& corpus2,
                       const TrainingConfig& config, TrainOrder order,
                       bool init_context, int epochs_second) {
  const Corpus& first = order == TrainOrder::Forward ? corpus1 : corpus2;
  const Corpus& second = order == TrainOrder::Forward ? corpus2 : corpus1;

  EmbeddingModel first_model = train(first, config);

  TrainingConfig second_config = config;
  second_config.seed = derive_seed(config.seed, 0x10);
  if (epochs_second >= 0) second_config.epochs = epochs_second;
  EmbeddingModel second_model =
      train(second, second_config, InitSpec::from_model(first_model, init_context));

  AlignedSpaces spaces;
  spaces.method = AlignMethod::VI;
  spaces.order = order;
  if (order == TrainOrder::Forward) {
    spaces.space1 = std::move(first_model);
    spaces.space2 = std::move(second_model);
  } else {
    spaces.space1 = std::move(second_model);
    spaces.space2 = std::move(first_model);
  }
  spaces.shared_rows =
      shared_vocabulary_rows(spaces.space1.vocab, spaces.space2.vocab);
  if (spaces.shared_rows.empty()) {
    throw std::runtime_error("aligned spaces share no vocabulary");
  }
  return spaces;
}

AlignedSpaces align_op(const EmbeddingModel& model1,
                       const EmbeddingModel& model2) {
  if (model1.dim() != model2.dim()) {
    throw std::invalid_argument("models must share dimensionality");
  }
  auto shared = shared_vocabulary_rows(model1.vocab, model2.vocab);
  if (shared.empty()) {
    throw std::runtime_error("orthogonal alignment needs a shared vocabulary");
  }

  AlignedSpaces spaces;
  spaces.method = AlignMethod::OP;
  spaces.space1 = model1;
  spaces.space2 = model2;
  spaces.shared_rows = std::move(shared);

  std::vector<int> rows1, rows2;
  rows1.reserve(spaces.shared_rows.size());
  rows2.reserve(spaces.shared_rows.size());
  for (const auto& [r1, r2] : spaces.shared_rows) {
    rows1.push_back(r1);
    rows2.push_back(r2);
  }
  // column means restricted to the shared vocabulary
  preprocess(spaces.space1.word_vectors, &spaces.space1.vocab, &rows1);
  preprocess(spaces.space2.word_vectors, &spaces.space2.vocab, &rows2);

  const std::size_t n = spaces.shared_rows.size();
  Matrix A(n, model1.dim()), B(n, model2.dim());
  for (std::size_t i = 0; i < n; ++i) {
    A.row(i) = spaces.space1.word_vectors.row(rows1[i]);
    B.row(i) = spaces.space2.word_vectors.row(rows2[i]);
  }
  const ProcrustesSolution sol = solve_procrustes(A, B);
  spaces.space2.word_vectors = spaces.space2.word_vectors * sol.rotation;
  return spaces;
}

AlignedSpaces align_wi(const InjectedCorpus& joint,
                       const TrainingConfig& config, const TargetSet& targets) {
  const auto* untag = joint.scheme == InjectScheme::TemporalReferencing
                          ? &joint.untag_map
                          : nullptr;
  bool any_pair = false;
  for (const auto& t : targets.targets) {
    if (joint.joint.vocab.contains(t.word + joint.tag1) &&
        joint.joint.vocab.contains(t.word + joint.tag2)) {
      any_pair = true;
      break;
    }
  }
  if (!any_pair) {
    throw std::runtime_error(
        "joint corpus holds no target with both tagged forms");
  }

  EmbeddingModel joint_model = train(joint.joint, config, {}, untag);

  std::unordered_set<std::string> target_forms;
  for (const auto& t : targets.targets) {
    target_forms.insert(t.word);  // TR untagged rows
    target_forms.insert(t.word + joint.tag1);
    target_forms.insert(t.word + joint.tag2);
  }

  // Space k selects each target's tag-k row under its plain name, plus
  // every untagged (non-target) row.
  auto view = [&](const std::string& tag, const std::string& label) {
    std::vector<VocabEntry> entries;
    std::vector<int> source_rows;
    for (const auto& t : targets.targets) {
      const int row = joint_model.vocab.id(t.word + tag);
      if (row < 0) continue;
      entries.push_back({t.word, joint_model.vocab.count(row)});
      source_rows.push_back(row);
    }
    for (std::size_t i = 0; i < joint_model.vocab.size(); ++i) {
      const std::string& w = joint_model.vocab.word(static_cast<int>(i));
      if (target_forms.count(w)) continue;
      entries.push_back({w, joint_model.vocab.count(static_cast<int>(i))});
      source_rows.push_back(static_cast<int>(i));
    }
    EmbeddingModel space;
    space.vocab = Vocabulary::from_entries(std::move(entries));
    space.config = config;
    space.corpus_label = label;
    space.word_vectors.resize(source_rows.size(), config.dim);
    space.context_vectors.resize(source_rows.size(), config.dim);
    for (std::size_t i = 0; i < source_rows.size(); ++i) {
      space.word_vectors.row(i) = joint_model.word_vectors.row(source_rows[i]);
      space.context_vectors.row(i) =
          joint_model.context_vectors.row(source_rows[i]);
    }
    return space;
  };

  AlignedSpaces spaces;
  spaces.method = AlignMethod::WI;
  spaces.order = TrainOrder::Forward;
  spaces.space1 = view(joint.tag1, "corpus1");
  spaces.space2 = view(joint.tag2, "corpus2");

  for (const auto& t : targets.targets) {
    const bool in1 = spaces.space1.vocab.contains(t.word);
    const bool in2 = spaces.space2.vocab.contains(t.word);
    if (in1 != in2) {
      std::cerr << "warning: target '" << t.word
                << "' lacks a tagged form in corpus" << (in1 ? "2" : "1")
                << "; excluded from the aligned spaces\n";
    }
  }
  spaces.shared_rows =
      shared_vocabulary_rows(spaces.space1.vocab, spaces.space2.vocab);
  return spaces;
}

AlignedSpaces align_vi_then_op(const AlignedSpaces& spaces) {
  if (spaces.method != AlignMethod::VI) {
    throw std::invalid_argument("post-hoc rotation expects VI-aligned spaces");
  }
  AlignedSpaces out = align_op(spaces.space1, spaces.space2);
  out.method = AlignMethod::VI_OP;
  out.order = spaces.order;
  return out;
}

void save_spaces(const AlignedSpaces& spaces, const std::string& dir,
                 const std::string& config_digest) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  save_embedding(spaces.space1, (base / "space1.vec").string());
  save_embedding(spaces.space2, (base / "space2.vec").string());
  std::map<std::string, std::string> meta;
  meta["method"] = to_string(spaces.method);
  meta["order"] = to_string(spaces.order);
  meta["shared_vocab_size"] = std::to_string(spaces.shared_rows.size());
  meta["dim"] = std::to_string(spaces.space1.dim());
  if (!config_digest.empty()) meta["config_digest"] = config_digest;
  write_key_value_file((base / "meta.txt").string(), meta);
}

AlignedSpaces load_spaces(const std::string& dir) {
  const auto base = std::filesystem::path(dir);
  AlignedSpaces spaces;
  spaces.space1 = load_embedding((base / "space1.vec").string());
  spaces.space2 = load_embedding((base / "space2.vec").string());
  const auto meta = read_key_value_file((base / "meta.txt").string());
  const auto method = meta.find("method");
  if (method != meta.end()) {
    if (method->second == "vi") spaces.method = AlignMethod::VI;
    else if (method->second == "op") spaces.method = AlignMethod::OP;
    else if (method->second == "wi") spaces.method = AlignMethod::WI;
    else if (method->second == "vi+op") spaces.method = AlignMethod::VI_OP;
    else throw std::runtime_error(dir + ": unknown alignment method in meta.txt");
  }
  const auto order = meta.find("order");
  if (order != meta.end()) {
    spaces.order = order->second == "bwd" ? TrainOrder::Backward
                                          : TrainOrder::Forward;
  }
  spaces.shared_rows =
      shared_vocabulary_rows(spaces.space1.vocab, spaces.space2.vocab);
  return spaces;
}

}  // namespace lscd
