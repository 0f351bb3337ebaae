#include "cli/commands.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "medsearch/checksum.h"
#include "medsearch/corpus.h"
#include "medsearch/corpus_tokens.h"
#include "medsearch/embedding.h"
#include "medsearch/errors.h"
#include "medsearch/http_api.h"
#include "medsearch/index.h"
#include "medsearch/journals.h"
#include "medsearch/medline_xml.h"
#include "medsearch/search.h"
#include "medsearch/service_config.h"
#include "medsearch/snapshot.h"

namespace medsearch::cli {
namespace {

namespace fs = std::filesystem;

struct IngestArgs {
  std::string store;
  std::string journals;
  std::vector<std::string> inputs;
};

struct TrainArgs {
  std::string store;
  std::string out;
  std::string lexicon;
  std::string stopwords;
  TrainingConfig config;
};

struct IndexArgs {
  std::string store;
  std::string lexicon;
  std::string out;
  std::string stopwords;
};

struct SnapshotArgs {
  std::string config;
  std::string store, lexicon, matrix, index;
  std::string boosts, stopwords;
};

struct SearchArgs {
  SnapshotArgs snapshot;
  std::string query;
  std::string tab = "reviews";
  int page = 1;
  std::size_t page_size = kDefaultPageSize;
  std::optional<int> year;
};

struct ServeArgs {
  SnapshotArgs snapshot;
  std::string host;
  int port = -1;
  std::size_t page_size = 0;
};

struct StatsArgs {
  std::string store, lexicon, index, matrix;
};

void add_snapshot_options(CLI::App& cmd, SnapshotArgs& a) {
  cmd.add_option("--config", a.config, "JSON service config (paths, host, port, page_size, boosts)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--store", a.store, "Corpus store");
  cmd.add_option("--lexicon", a.lexicon, "Lexicon file");
  cmd.add_option("--matrix", a.matrix, "Embedding matrix");
  cmd.add_option("--index", a.index, "Index file (reverse records at <index>.docs)");
  cmd.add_option("--boosts", a.boosts, "Boost configuration file")->check(CLI::ExistingFile);
  cmd.add_option("--stopwords", a.stopwords, "Stopword list overriding the embedded one")->check(CLI::ExistingFile);
}

ServiceConfig resolve_config(const SnapshotArgs& a) {
  ServiceConfig cfg = a.config.empty() ? ServiceConfig{} : ServiceConfig::from_json_file(a.config);
  cfg.apply_environment();
  if (!a.store.empty()) cfg.paths.store = a.store;
  if (!a.lexicon.empty()) cfg.paths.lexicon = a.lexicon;
  if (!a.matrix.empty()) cfg.paths.matrix = a.matrix;
  if (!a.index.empty()) cfg.paths.index = a.index;
  if (!a.boosts.empty()) cfg.boost_file = a.boosts;
  if (!a.stopwords.empty()) cfg.stopword_file = a.stopwords;
  return cfg;
}

bool report_missing(const ServiceConfig& cfg, std::ostream& err) {
  const auto missing = cfg.paths.missing();
  for (const auto& p : missing) err << "missing snapshot file: " << p.string() << '\n';
  return !missing.empty();
}

TextPipeline pipeline_for(const std::string& stopwords) {
  return stopwords.empty() ? TextPipeline() : TextPipeline(StopwordList::load(stopwords));
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && (name.ends_with(".xml") || name.ends_with(".xml.gz"))) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  const auto journals = load_journal_table(a.journals);
  CorpusStore store = fs::exists(a.store) ? load_corpus_store(a.store) : CorpusStore{};
  store.update_journal_table(journals);

  std::size_t parsed = 0, kept = 0, dropped = 0, skipped = 0, batches = 0;
  for (const auto& file : expand_inputs(a.inputs)) {
    const std::string batch_id = file.filename().string();
    if (store.has_batch(batch_id)) {
      err << "batch " << batch_id << " already ingested; skipping\n";
      continue;
    }
    // Checksums cover the file as distributed, i.e. before decompression.
    const std::string raw = [&] {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw DataError("cannot open " + file.string());
      return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }();
    const std::string digest = md5_hex(raw);
    if (const auto sidecar = find_checksum_sidecar(file)) {
      std::ifstream in(*sidecar);
      const std::string expected = parse_checksum_sidecar(
          std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
      if (!verify_checksum(raw, expected)) {
        err << "checksum mismatch: " << file.string() << " (expected " << expected << ", got " << digest << ")\n";
        return kExitData;
      }
    }
    const std::string xml = raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
                                    static_cast<unsigned char>(raw[1]) == 0x8b
                                ? gunzip(raw)
                                : raw;
    ParsedBatch batch;
    try {
      batch = parse_document_batch(xml);
    } catch (const ParseError& e) {
      throw ParseError(file.string() + ": " + e.what(), e.byte_offset());
    }
    for (const auto& w : batch.warnings) err << batch_id << ": " << w << '\n';
    const auto joined = join_journal_metadata(batch.records, journals);
    store = ingest_batch(store, batch_id, joined.kept, digest, unix_now());
    parsed += batch.records.size();
    kept += joined.kept.size();
    dropped += joined.dropped_count;
    skipped += batch.skipped;
    ++batches;
  }
  save_corpus_store(store, a.store);
  out << "batches " << batches << " parsed " << parsed << " kept " << kept << " dropped " << dropped << " skipped "
      << skipped << " stored " << store.size() << '\n';
  return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  a.config.validate();
  const auto store = load_corpus_store(a.store);
  if (store.size() == 0) {
    err << "corpus store " << a.store << " is empty; nothing to train\n";
    return kExitData;
  }
  const auto pipeline = pipeline_for(a.stopwords);
  const auto corpus = tokenize_corpus(store, pipeline);
  const auto streams = training_streams(corpus.documents);
  const auto result = train_skipgram(streams, a.config, [&](int epoch, double loss) {
    char line[96];
    std::snprintf(line, sizeof line, "epoch %d/%d loss %.6f\n", epoch + 1, a.config.epochs, loss);
    out << line << std::flush;
  });

  const fs::path matrix_path(a.out);
  const fs::path lexicon_path = a.lexicon.empty() ? fs::path(a.out + ".lexicon") : fs::path(a.lexicon);
  result.matrix.save(matrix_path);
  result.matrix.save_vocab_sidecar(fs::path(a.out + ".vocab.txt"), corpus.lexicon);
  corpus.lexicon.save(lexicon_path);
  out << "matrix " << matrix_path.string() << " rows " << result.matrix.size() << " dim " << result.matrix.dim()
      << "\nlexicon " << lexicon_path.string() << " tokens " << corpus.lexicon.size() << '\n';
  return kExitOk;
}

int cmd_index(const IndexArgs& a, std::ostream& out, std::ostream&) {
  const auto store = load_corpus_store(a.store);
  const auto lexicon = Lexicon::load(a.lexicon);
  const auto docs = tokenize_corpus(store, pipeline_for(a.stopwords), lexicon);

  InvertedIndex index;
  if (fs::exists(a.out) && fs::exists(reverse_record_path(a.out))) {
    const auto existing = load_index(a.out);
    std::vector<DocumentTerms> changed;
    for (const auto& d : docs) {
      std::vector<Tid> terms(d.title_tids);
      terms.insert(terms.end(), d.abstract_tids.begin(), d.abstract_tids.end());
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      const auto old = existing.terms_of(d.pmid);
      if (!existing.contains_document(d.pmid) || !std::equal(old.begin(), old.end(), terms.begin(), terms.end())) {
        changed.push_back({d.pmid, std::move(terms)});
      }
    }
    index = merge_incremental(existing, changed);
    out << "merged " << changed.size() << " new or changed documents\n";
  } else {
    index = build_index(docs);
  }
  save_index(index, a.out);
  out << "index " << a.out << " documents " << index.document_count() << " tids " << index.postings().size()
      << " rows " << index.row_count() << '\n';
  return kExitOk;
}

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = resolve_config(a.snapshot);
  if (report_missing(cfg, err)) return kExitData;
  cfg.validate();
  const auto category = parse_category(a.tab);
  if (!category) throw InputError("unknown tab '" + a.tab + "'; valid tabs: reviews, guidelines, studies");

  const auto snapshot = SearchSnapshot::load(cfg.paths, cfg.text_pipeline());
  auto options = cfg.search_options();
  options.page_size = a.page_size;
  options.current_year = a.year;
  const auto response = execute_search({a.query, *category, a.page}, *snapshot, options);

  std::size_t rank = static_cast<std::size_t>(a.page - 1) * a.page_size;
  for (const auto& r : response.results) {
    char score[32];
    std::snprintf(score, sizeof score, "%.17g", r.relevance);
    out << ++rank << '\t' << r.pmid << '\t' << r.year << '\t' << r.journal_iso_abbrev << '\t' << score << '\t'
        << r.title << '\n';
  }
  return kExitOk;
}

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  auto cfg = resolve_config(a.snapshot);
  if (!a.host.empty()) cfg.host = a.host;
  if (a.port >= 0) cfg.port = a.port;
  if (a.page_size > 0) cfg.page_size = a.page_size;
  if (report_missing(cfg, err)) return kExitData;
  cfg.validate();

  SearchService service(SearchSnapshot::load(cfg.paths, cfg.text_pipeline()), cfg.search_options());

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  HttpServer server(service);
  const int port = server.bind(cfg.host, cfg.port);
  out << "serving " << service.snapshot()->corpus().size() << " documents on http://" << cfg.host << ':' << port
      << " (index " << service.snapshot()->version() << ")" << std::endl;
  std::thread listener([&] { server.listen(); });
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  listener.join();
  out << "stopped" << std::endl;
  return kExitOk;
}

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  const auto store = load_corpus_store(a.store);
  out << "documents\t" << store.size() << '\n'
      << "journals\t" << store.journal_table().size() << '\n'
      << "batches\t" << store.ingest_log().size() << '\n';
  if (!a.lexicon.empty()) {
    const auto lexicon = Lexicon::load(a.lexicon);
    out << "lexicon_tokens\t" << lexicon.size() << '\n' << "lexicon_corpus_size\t" << lexicon.corpus_size() << '\n';
  }
  if (!a.index.empty()) {
    const auto index = load_index(a.index);
    out << "index_documents\t" << index.document_count() << '\n'
        << "index_tids\t" << index.postings().size() << '\n'
        << "index_rows\t" << index.row_count() << '\n';
  }
  if (!a.matrix.empty()) {
    const auto matrix = EmbeddingMatrix::load(a.matrix);
    out << "matrix_rows\t" << matrix.size() << '\n' << "matrix_dim\t" << matrix.dim() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clinical literature search: ingest, train, index, search, serve"};
  app.name("medsearch");
  app.require_subcommand(1, 1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse MEDLINE XML batches into the corpus store");
  ingest_cmd->add_option("--store", ingest.store, "Corpus store to create or update")->required();
  ingest_cmd->add_option("--journals", ingest.journals, "Journal metadata table")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("inputs", ingest.inputs, "Batch files (.xml, .xml.gz) or directories")
      ->required()
      ->check(CLI::ExistingPath);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Build the lexicon and train skip-gram embeddings");
  train_cmd->add_option("--store", train.store, "Corpus store")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Embedding matrix output")->required();
  train_cmd->add_option("--lexicon", train.lexicon, "Lexicon output (default <out>.lexicon)");
  train_cmd->add_option("--stopwords", train.stopwords, "Stopword list")->check(CLI::ExistingFile);
  train_cmd->add_option("--dim", train.config.dim, "Vector length")->capture_default_str();
  train_cmd->add_option("--window", train.config.window, "Context window")->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs, "Training epochs")->capture_default_str();
  train_cmd->add_option("--negative", train.config.negative_samples, "Negative samples")->capture_default_str();
  train_cmd->add_option("--lr", train.config.initial_learning_rate, "Initial learning rate")->capture_default_str();
  train_cmd->add_option("--min-count", train.config.min_token_count, "Minimum document frequency")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.config.rng_seed, "RNG seed")->capture_default_str();

  IndexArgs index;
  auto* index_cmd = app.add_subcommand("index", "Build or incrementally update the inverted index");
  index_cmd->add_option("--store", index.store, "Corpus store")->required()->check(CLI::ExistingFile);
  index_cmd->add_option("--lexicon", index.lexicon, "Lexicon from train")->required()->check(CLI::ExistingFile);
  index_cmd->add_option("--out", index.out, "Index output (reverse records at <out>.docs)")->required();
  index_cmd->add_option("--stopwords", index.stopwords, "Stopword list")->check(CLI::ExistingFile);

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Run one query and print tab-separated results");
  add_snapshot_options(*search_cmd, search.snapshot);
  search_cmd->add_option("-q,--query", search.query, "Query text")->required();
  search_cmd->add_option("--tab", search.tab, "Publication category")
      ->capture_default_str()
      ->check(CLI::IsMember({"reviews", "guidelines", "studies"}, CLI::ignore_case));
  search_cmd->add_option("--page", search.page, "Page number")->capture_default_str()->check(CLI::PositiveNumber);
  search_cmd->add_option("--page-size", search.page_size, "Results per page")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--year", search.year, "Current year for the age penalty (default: today)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP JSON API");
  add_snapshot_options(*serve_cmd, serve.snapshot);
  serve_cmd->add_option("--host", serve.host, "Listen address");
  serve_cmd->add_option("--port", serve.port, "Listen port (0 picks one)");
  serve_cmd->add_option("--page-size", serve.page_size, "Results per page")->check(CLI::PositiveNumber);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Print corpus, lexicon and index cardinalities");
  stats_cmd->add_option("--store", stats.store, "Corpus store")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--lexicon", stats.lexicon, "Lexicon")->check(CLI::ExistingFile);
  stats_cmd->add_option("--index", stats.index, "Index")->check(CLI::ExistingFile);
  stats_cmd->add_option("--matrix", stats.matrix, "Embedding matrix")->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out, err);
    if (*train_cmd) return cmd_train(train, out, err);
    if (*index_cmd) return cmd_index(index, out, err);
    if (*search_cmd) return cmd_search(search, out, err);
    if (*serve_cmd) return cmd_serve(serve, out, err);
    if (*stats_cmd) return cmd_stats(stats, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace medsearch::cli
