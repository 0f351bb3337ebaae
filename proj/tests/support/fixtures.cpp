#include "support/fixtures.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "medsearch/corpus_tokens.h"
#include "medsearch/index.h"

namespace medsearch::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "medsearch-test-XXXXXX").string();
  if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

const std::vector<std::string> kStopwords = {"the", "of", "and", "in", "a", "with", "for", "is", "at", "The", "An"};
const std::vector<std::string> kAcronyms = {"ACE", "MRI", "WHO", "ST", "COVID19"};

const std::vector<std::set<std::string>> kTypeSets = {
    {"Journal Article"},
    {"Journal Article", "Randomized Controlled Trial"},
    {"Clinical Trial"},
    {"Review"},
    {"Journal Article", "Review"},
    {"Systematic Review", "Meta-Analysis"},
    {"Practice Guideline"},
    {"Guideline", "Journal Article"},
    {"Consensus Development Conference"},
    {"Review", "Practice Guideline"},
};

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(double p, std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

class WordSource {
 public:
  WordSource(const std::vector<std::string>& vocab) : vocab_(vocab) {
    std::vector<double> weights;
    for (std::size_t i = 0; i < vocab.size(); ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
    zipf_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  std::string word(std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0, 1)(rng);
    if (u < 0.15) return pick(kStopwords, rng);
    if (u < 0.20) return pick(kAcronyms, rng);
    std::string w = vocab_[zipf_(rng)];
    if (u < 0.25) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
  }

  std::string text(std::size_t n, std::mt19937_64& rng) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += chance(0.1, rng) ? "-" : " ";
      out += word(rng);
      if (chance(0.05, rng)) out += chance(0.5, rng) ? "," : ".";
    }
    return out;
  }

 private:
  const std::vector<std::string>& vocab_;
  std::discrete_distribution<std::size_t> zipf_;
};

}  // namespace

SyntheticCorpus make_corpus(const CorpusShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SyntheticCorpus corpus;
  for (std::size_t i = 0; i < shape.vocabulary; ++i) corpus.vocabulary.push_back("w" + std::to_string(i));

  for (std::size_t j = 0; j < shape.journals; ++j) {
    JournalRecord jr;
    jr.journal_name = "Journal of Synthetic Medicine " + std::to_string(j);
    jr.iso_abbrev = "J Synth Med " + std::to_string(j);
    jr.in_medicine_subject = true;
    jr.jif = chance(shape.zero_jif_rate, rng) ? 0.0 : std::uniform_real_distribution<double>(0.1, 80.0)(rng);
    corpus.journals.push_back(jr);
  }

  WordSource words(corpus.vocabulary);
  Pmid pmid = 1000;
  for (std::size_t i = 0; i < shape.documents; ++i) {
    pmid += std::uniform_int_distribution<Pmid>(1, 7)(rng);
    const auto& journal = pick(corpus.journals, rng);
    JoinedDocument doc;
    auto& r = doc.record;
    r.pmid = pmid;
    r.title = words.text(std::uniform_int_distribution<std::size_t>(2, 8)(rng), rng);
    if (!chance(0.1, rng)) r.abstract = words.text(std::uniform_int_distribution<std::size_t>(5, 40)(rng), rng);
    r.journal_name = journal.journal_name;
    r.journal_iso_abbrev = journal.iso_abbrev;
    r.authors = {"Smith J", "Doe AB"};
    r.pub_date.year = std::uniform_int_distribution<int>(shape.min_year, shape.max_year)(rng);
    if (chance(0.8, rng)) {
      r.pub_date.month = std::uniform_int_distribution<int>(1, 12)(rng);
      if (chance(0.7, rng)) r.pub_date.day = std::uniform_int_distribution<int>(1, 31)(rng);
    }
    r.pub_types = pick(kTypeSets, rng);
    r.language = "eng";
    if (chance(shape.flagged_rate, rng)) r.language = chance(0.5, rng) ? "fre" : "ger";
    if (chance(shape.flagged_rate, rng)) {
      r.is_erratum = true;
      r.pub_types.insert("Published Erratum");
    }
    if (chance(shape.flagged_rate, rng)) {
      r.is_retracted = true;
      r.pub_types.insert("Retracted Publication");
    }
    doc.jif = journal.jif;
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

CorpusStore make_store(const SyntheticCorpus& corpus) {
  CorpusStore store;
  store.update_journal_table(corpus.journals);
  return ingest_batch(store, "synthetic", corpus.documents);
}

std::shared_ptr<const SearchSnapshot> make_snapshot(const CorpusStore& store, int dim, std::uint64_t seed) {
  TextPipeline pipeline;
  auto tokenized = tokenize_corpus(store, pipeline);
  auto index = build_index(tokenized.documents);
  EmbeddingMatrix matrix(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::vector<float> row(static_cast<std::size_t>(dim));
  for (Tid t = 1; t <= tokenized.lexicon.size(); ++t) {
    for (auto& x : row) x = normal(rng);
    matrix.set_row(t, row);
  }
  return std::make_shared<const SearchSnapshot>(store, std::move(tokenized.lexicon), std::move(matrix),
                                                std::move(index), std::move(pipeline));
}

std::string random_query(const SyntheticCorpus& corpus, std::mt19937_64& rng) {
  // Favor the head of the vocabulary so most queries have candidates.
  std::geometric_distribution<std::size_t> head(0.15);
  const auto content = [&] {
    return corpus.vocabulary[std::min(head(rng), corpus.vocabulary.size() - 1)];
  };
  std::string q = content();
  const int extra = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < extra; ++i) {
    const double u = std::uniform_real_distribution<double>(0, 1)(rng);
    q += ' ';
    if (u < 0.15) q += pick(kStopwords, rng);
    else if (u < 0.25) q += pick(kAcronyms, rng);
    else if (u < 0.30) q += "unseenword";
    else q += content();
  }
  if (chance(0.2, rng)) q[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(q[0])));
  return q;
}

JoinedDocument make_document(Pmid pmid, std::string title, std::string abstract, PartialDate date,
                             std::set<std::string> pub_types, double jif, std::string journal) {
  JoinedDocument d;
  d.record.pmid = pmid;
  d.record.title = std::move(title);
  d.record.abstract = std::move(abstract);
  d.record.journal_name = journal;
  d.record.journal_iso_abbrev = journal;
  d.record.pub_date = date;
  d.record.pub_types = std::move(pub_types);
  d.record.language = "eng";
  d.jif = jif;
  return d;
}

}  // namespace medsearch::testing
