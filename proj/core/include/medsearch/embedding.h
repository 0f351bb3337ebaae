#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "medsearch/text.h"
#include "medsearch/types.h"

namespace medsearch {

struct TrainingConfig {
  int dim = 100;
  int window = 100;
  int epochs = 10;
  int negative_samples = 5;
  double initial_learning_rate = 0.025;
  double final_learning_rate = 1e-4;
  int min_token_count = 1;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on a non-positive dim/window/epochs/negatives/lr.
  void validate() const;
};

/// One dense float vector per TID. Rows are kept in ascending TID order.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return tids_.size(); }
  const std::vector<Tid>& tids() const { return tids_; }

  /// Empty span when tid has no vector.
  std::span<const float> row(Tid tid) const;
  bool contains(Tid tid) const { return !row(tid).empty(); }

  /// Inserts or overwrites. `values` must have dim() entries, all finite.
  void set_row(Tid tid, std::span<const float> values);

  /// Binary: "MSEM" magic, u32 version, u32 dim, u32 rows, then
  /// (u32 tid, dim x f32) per row, little-endian.
  void save(const std::filesystem::path& path) const;
  static EmbeddingMatrix load(const std::filesystem::path& path);
  /// Debug sidecar, "tid\ttoken" per row.
  void save_vocab_sidecar(const std::filesystem::path& path, const Lexicon& lexicon) const;

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  int dim_ = 0;
  std::vector<Tid> tids_;
  std::vector<float> data_;                 // row-major, tids_.size() x dim_
  std::vector<std::int32_t> slot_by_tid_;   // tid -> row, -1 if absent
};

/// Dense weighted sum of token vectors (title and query embeddings).
using WeightedVector = std::vector<double>;

struct TrainingResult {
  EmbeddingMatrix matrix;
  std::vector<double> epoch_losses;  // mean negative-sampling loss per pair
};

/// Per-epoch progress callback: (epoch index from 0, mean loss).
using EpochCallback = std::function<void(int, double)>;

/// Skip-gram with negative sampling over per-document TID streams. Context
/// windows never cross documents. Deterministic for a given seed.
/// Throws InputError on an empty corpus, ConfigError on a bad config.
TrainingResult train_skipgram(std::span<const std::vector<Tid>> streams, const TrainingConfig& config,
                              const EpochCallback& on_epoch = {});

/// ln(corpus_size / doc_freq). Throws InputError for an unknown TID.
double idf_weight(Tid tid, const Lexicon& lexicon);

/// Sum of idf_weight(t) * vector(t) over TIDs that have a vector.
WeightedVector embed_weighted(std::span<const Tid> tids, const EmbeddingMatrix& matrix,
                              const Lexicon& lexicon);

/// u.v / (|u||v|), or 0 when either norm is 0.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace medsearch
