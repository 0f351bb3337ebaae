#include "medsearch/embedding.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.h"
#include "medsearch/errors.h"

namespace medsearch {

EmbeddingMatrix::EmbeddingMatrix(int dim) : dim_(dim) {
  if (dim <= 0) throw ConfigError("embedding dim must be > 0");
}

std::span<const float> EmbeddingMatrix::row(Tid tid) const {
  if (tid >= slot_by_tid_.size() || slot_by_tid_[tid] < 0) return {};
  const auto d = static_cast<std::size_t>(dim_);
  return std::span<const float>(data_).subspan(static_cast<std::size_t>(slot_by_tid_[tid]) * d, d);
}

void EmbeddingMatrix::set_row(Tid tid, std::span<const float> values) {
  if (values.size() != static_cast<std::size_t>(dim_)) {
    throw InputError("row has " + std::to_string(values.size()) + " components, matrix dim is " + std::to_string(dim_));
  }
  if (!std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); })) {
    throw InputError("non-finite component in embedding row for TID " + std::to_string(tid));
  }
  const auto d = static_cast<std::size_t>(dim_);
  if (tid >= slot_by_tid_.size()) slot_by_tid_.resize(static_cast<std::size_t>(tid) + 1, -1);
  if (slot_by_tid_[tid] >= 0) {
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(slot_by_tid_[tid] * d));
    return;
  }
  const auto pos = std::lower_bound(tids_.begin(), tids_.end(), tid);
  const auto slot = static_cast<std::size_t>(pos - tids_.begin());
  tids_.insert(pos, tid);
  data_.insert(data_.begin() + static_cast<std::ptrdiff_t>(slot * d), values.begin(), values.end());
  if (slot + 1 == tids_.size()) {
    slot_by_tid_[tid] = static_cast<std::int32_t>(slot);
  } else {
    for (std::size_t s = slot; s < tids_.size(); ++s) slot_by_tid_[tids_[s]] = static_cast<std::int32_t>(s);
  }
}

namespace {
constexpr char kMatrixMagic[5] = "MSEM";
constexpr std::uint32_t kMatrixVersion = 1;
}  // namespace

void EmbeddingMatrix::save(const std::filesystem::path& path) const {
  detail::atomic_write(path, [&](std::ostream& out) {
    out.write(kMatrixMagic, 4);
    detail::write_u32(out, kMatrixVersion);
    detail::write_u32(out, static_cast<std::uint32_t>(dim_));
    detail::write_u32(out, static_cast<std::uint32_t>(tids_.size()));
    for (std::size_t s = 0; s < tids_.size(); ++s) {
      detail::write_u32(out, tids_[s]);
      for (std::size_t d = 0; d < static_cast<std::size_t>(dim_); ++d) {
        detail::write_f32(out, data_[s * static_cast<std::size_t>(dim_) + d]);
      }
    }
  });
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const auto what = path.string();
  detail::expect_magic(in, kMatrixMagic, what.c_str());
  if (detail::read_u32(in, "matrix version") != kMatrixVersion) throw DataError(what + ": unsupported matrix version");
  const auto dim = detail::read_u32(in, "matrix dim");
  const auto rows = detail::read_u32(in, "matrix row count");
  if (dim == 0 || dim > (1u << 16)) throw DataError(what + ": implausible dim " + std::to_string(dim));

  EmbeddingMatrix m(static_cast<int>(dim));
  std::vector<float> row(dim);
  Tid previous = 0;
  for (std::uint32_t r = 0; r < rows; ++r) {
    const Tid tid = detail::read_u32(in, "matrix row tid");
    if (tid == 0 || (r > 0 && tid <= previous)) throw DataError(what + ": TIDs not strictly ascending");
    for (auto& v : row) {
      v = detail::read_f32(in, "matrix row");
      if (!std::isfinite(v)) throw DataError(what + ": non-finite component");
    }
    m.set_row(tid, row);
    previous = tid;
  }
  detail::expect_eof(in, what.c_str());
  return m;
}

void EmbeddingMatrix::save_vocab_sidecar(const std::filesystem::path& path, const Lexicon& lexicon) const {
  detail::atomic_write(path, [&](std::ostream& out) {
    for (Tid t : tids_) out << t << '\t' << (lexicon.contains(t) ? lexicon.token(t) : std::string("?")) << '\n';
  });
}

double idf_weight(Tid tid, const Lexicon& lexicon) {
  if (!lexicon.contains(tid)) throw InputError("TID " + std::to_string(tid) + " is not in the lexicon");
  const auto df = lexicon.doc_freq(tid);
  if (df == 0) throw InputError("TID " + std::to_string(tid) + " has document frequency 0");
  return std::log(static_cast<double>(lexicon.corpus_size()) / static_cast<double>(df));
}

WeightedVector embed_weighted(std::span<const Tid> tids, const EmbeddingMatrix& matrix, const Lexicon& lexicon) {
  WeightedVector sum(static_cast<std::size_t>(matrix.dim()), 0.0);
  for (Tid t : tids) {
    const auto row = matrix.row(t);
    if (row.empty()) continue;
    const double w = idf_weight(t, lexicon);
    for (std::size_t d = 0; d < row.size(); ++d) sum[d] += w * static_cast<double>(row[d]);
  }
  return sum;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InputError("cosine of vectors with different lengths");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

}  // namespace medsearch
