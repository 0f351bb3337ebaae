#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "medsearch/embedding.h"
#include "medsearch/errors.h"
#include "medsearch/sgns.h"

namespace medsearch {

void TrainingConfig::validate() const {
  if (dim <= 0) throw ConfigError("dim must be > 0");
  if (window <= 0) throw ConfigError("window must be > 0");
  if (epochs <= 0) throw ConfigError("epochs must be > 0");
  if (negative_samples < 1) throw ConfigError("negative_samples must be >= 1");
  if (!(initial_learning_rate > 0.0)) throw ConfigError("initial_learning_rate must be > 0");
  if (!(final_learning_rate > 0.0) || final_learning_rate > initial_learning_rate) {
    throw ConfigError("final_learning_rate must be in (0, initial_learning_rate]");
  }
  if (min_token_count < 1) throw ConfigError("min_token_count must be >= 1");
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Samples vocabulary slots with probability proportional to count^0.75.
class NoiseDistribution {
 public:
  explicit NoiseDistribution(const std::vector<std::uint64_t>& counts) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
  }

  std::size_t sample(std::mt19937_64& rng) const {
    const double x = unit_real(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

TrainingResult train_skipgram(std::span<const std::vector<Tid>> streams, const TrainingConfig& config,
                              const EpochCallback& on_epoch) {
  config.validate();
  if (streams.empty()) throw InputError("cannot train on an empty corpus");

  // Document frequency decides which TIDs take part.
  std::unordered_map<Tid, std::uint32_t> doc_freq;
  std::unordered_map<Tid, std::uint64_t> occurrences;
  for (const auto& stream : streams) {
    std::vector<Tid> distinct(stream);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (Tid t : distinct) ++doc_freq[t];
    for (Tid t : stream) ++occurrences[t];
  }
  std::vector<Tid> vocab;
  for (const auto& [tid, df] : doc_freq) {
    if (df >= static_cast<std::uint32_t>(config.min_token_count)) vocab.push_back(tid);
  }
  std::sort(vocab.begin(), vocab.end());
  if (vocab.empty()) throw InputError("no tokens reach min_token_count; nothing to train");

  std::unordered_map<Tid, std::uint32_t> slot;
  std::vector<std::uint64_t> counts(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    slot[vocab[i]] = static_cast<std::uint32_t>(i);
    counts[i] = occurrences[vocab[i]];
  }

  std::vector<std::vector<std::uint32_t>> docs;
  docs.reserve(streams.size());
  std::uint64_t total_tokens = 0;
  for (const auto& stream : streams) {
    auto& d = docs.emplace_back();
    for (Tid t : stream) {
      if (auto it = slot.find(t); it != slot.end()) d.push_back(it->second);
    }
    total_tokens += d.size();
  }

  const auto dim = static_cast<std::size_t>(config.dim);
  std::mt19937_64 rng(config.rng_seed);
  std::vector<float> input(vocab.size() * dim);
  for (auto& w : input) w = static_cast<float>((unit_real(rng) - 0.5) / static_cast<double>(dim));
  std::vector<float> output(vocab.size() * dim, 0.0f);
  const NoiseDistribution noise(counts);

  auto in_row = [&](std::size_t s) { return std::span<float>(input).subspan(s * dim, dim); };
  auto out_row = [&](std::size_t s) { return std::span<float>(output).subspan(s * dim, dim); };

  std::vector<float> grad_center(dim), grad_context(dim);
  std::vector<float> grad_negatives(dim * static_cast<std::size_t>(config.negative_samples));
  std::vector<std::size_t> negatives;
  std::vector<std::span<const float>> negative_rows;

  const double total_work = static_cast<double>(total_tokens) * config.epochs;
  const double lr_span = config.initial_learning_rate - config.final_learning_rate;
  std::uint64_t processed = 0;

  TrainingResult result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& doc : docs) {
      const auto n = doc.size();
      for (std::size_t i = 0; i < n; ++i, ++processed) {
        const auto lr = static_cast<float>(config.initial_learning_rate -
                                           lr_span * (static_cast<double>(processed) / total_work));
        const std::size_t center = doc[i];
        const std::size_t lo = i >= static_cast<std::size_t>(config.window) ? i - config.window : 0;
        const std::size_t hi = std::min(n, i + static_cast<std::size_t>(config.window) + 1);
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const std::size_t context = doc[j];

          negatives.clear();
          negative_rows.clear();
          for (int k = 0; k < config.negative_samples; ++k) {
            const auto s = noise.sample(rng);
            if (s == context) continue;
            negatives.push_back(s);
            negative_rows.push_back(out_row(s));
          }

          const auto c_row = in_row(center);
          const auto o_row = out_row(context);
          const float loss = sgns::pair_loss_and_gradient<float>(
              c_row, o_row, negative_rows, grad_center, grad_context,
              std::span<float>(grad_negatives).first(negatives.size() * dim));
          loss_sum += loss;
          ++pairs;

          for (std::size_t d = 0; d < dim; ++d) o_row[d] -= lr * grad_context[d];
          for (std::size_t k = 0; k < negatives.size(); ++k) {
            auto row = out_row(negatives[k]);
            for (std::size_t d = 0; d < dim; ++d) row[d] -= lr * grad_negatives[k * dim + d];
          }
          for (std::size_t d = 0; d < dim; ++d) c_row[d] -= lr * grad_center[d];
        }
      }
    }
    const double mean = pairs == 0 ? 0.0 : loss_sum / static_cast<double>(pairs);
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }

  result.matrix = EmbeddingMatrix(config.dim);
  for (std::size_t s = 0; s < vocab.size(); ++s) result.matrix.set_row(vocab[s], in_row(s));
  return result;
}

}  // namespace medsearch
