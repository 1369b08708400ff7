#include "sarcasm/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sarcasm/corpus.hpp"
#include "sarcasm/digest.hpp"
#include "sarcasm/errors.hpp"
#include "sarcasm/features.hpp"
#include "sarcasm/model_io.hpp"
#include "sarcasm/report.hpp"
#include "sarcasm/training.hpp"

namespace sarcasm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string reviews;
  std::string labels;
  std::vector<int> stars;
  std::size_t train_size = kDefaultTrainSize;
  std::size_t test_size = kDefaultTestSize;
  std::uint64_t seed = 42;
  double lr = 0.01;
  std::vector<double> lr_grid{1e-4, 1e-3, 1e-2};
  double lr_decay = 1.0;
  std::vector<std::size_t> hidden{15, 15};
  std::size_t epochs = 10;
  std::size_t batch_size = 100;
  double keep_prob = 0.75;
  std::string stages = "sarcastic:500,nonsarcastic:500:3,main";
  bool keep_adam = false;
  bool reshuffle = false;
  std::string model;
  std::string out;
  std::string input;
  std::string annotator = "cli";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<int> stars_or_all(const Options& o) {
  if (o.stars.empty()) return {1, 2, 3, 4, 5};
  std::set<int> unique(o.stars.begin(), o.stars.end());
  return {unique.begin(), unique.end()};
}

TrainConfig train_config(const Options& o) {
  TrainConfig c;
  c.lr = o.lr;
  c.epochs = o.epochs;
  c.batch_size = o.batch_size;
  c.stages = parse_stages(o.stages);
  c.lr_grid = o.lr_grid;
  c.seed = o.seed;
  c.lr_decay = o.lr_decay;
  c.reset_adam_per_stage = !o.keep_adam;
  c.reshuffle_each_epoch = o.reshuffle;
  c.model.hidden = o.hidden;
  c.model.keep_prob = o.keep_prob;
  c.model.seed = o.seed;
  c.validate();
  return c;
}

json config_json(const Options& o, const TrainConfig& c) {
  return {{"train_size", o.train_size},
          {"test_size", o.test_size},
          {"lr", hex_double(c.lr)},
          {"lr_grid", [&] {
             json g = json::array();
             for (double v : c.lr_grid) g.push_back(hex_double(v));
             return g;
           }()},
          {"lr_decay", hex_double(c.lr_decay)},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"stages", format_stages(c.stages)},
          {"reset_adam_per_stage", c.reset_adam_per_stage},
          {"reshuffle_each_epoch", c.reshuffle_each_epoch},
          {"hidden", c.model.hidden},
          {"keep_prob", hex_double(c.model.keep_prob)},
          {"seed", c.seed}};
}

// Reproducibility stanza attached to every output artifact.
json stanza(std::uint64_t seed, const json& config, const json& extra = json::object()) {
  json s = {{"version", SARCASM_VERSION},
            {"seed", seed},
            {"config_digest", sha256_hex(config.dump())},
            {"config", config}};
  for (const auto& [k, v] : extra.items()) s[k] = v;
  return s;
}

struct Corpus {
  std::vector<Review> reviews;
  std::vector<ParseError> review_errors;
  LabelJoin join;
  std::vector<ParseError> label_errors;
  json digests = json::object();
};

Corpus load_corpus(const Options& o, bool need_labels, std::ostream& err) {
  if (o.reviews.empty()) throw UsageError("--reviews is required");
  if (need_labels && o.labels.empty()) throw UsageError("--labels is required");
  Corpus c;
  auto parsed = parse_review_file(o.reviews);
  c.reviews = std::move(parsed.records);
  c.review_errors = std::move(parsed.errors);
  c.digests["reviews"] = sha256_file(o.reviews);
  std::vector<SarcasmLabel> labels;
  if (!o.labels.empty()) {
    auto lp = parse_label_file(o.labels);
    labels = std::move(lp.records);
    c.label_errors = std::move(lp.errors);
    c.digests["labels"] = sha256_file(o.labels);
  }
  c.join = attach_labels(c.reviews, labels);
  if (!c.review_errors.empty())
    err << "warning: " << c.review_errors.size() << " review line(s) rejected\n";
  if (!c.label_errors.empty())
    err << "warning: " << c.label_errors.size() << " label line(s) rejected\n";
  if (!c.join.unknown_ids.empty())
    err << "warning: " << c.join.unknown_ids.size() << " labeled id(s) not in corpus\n";
  return c;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

fs::path star_file(const fs::path& dir, int stars, std::string_view suffix) {
  return dir / ("star" + std::to_string(stars) + std::string(suffix));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

json errors_json(const std::vector<ParseError>& errors) {
  json arr = json::array();
  for (const auto& e : errors) arr.push_back({{"line", e.line}, {"reason", e.reason}});
  return arr;
}

// --- ingest ---------------------------------------------------------------

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("--out is required");
  Corpus c = load_corpus(o, false, err);
  const fs::path dir = o.out;
  ensure_dir(dir);
  const json prov = stanza(o.seed, json::object(), {{"corpus_digests", c.digests}});

  std::map<std::string, bool> resolved;
  for (const auto& lr : c.join.labeled) resolved[lr.review.review_id] = lr.sarcastic;
  const auto buckets = segregate_by_stars(c.reviews);
  for (int s = 1; s <= kNumStars; ++s) {
    const auto& bucket = buckets[s - 1];
    json ids = json::array();
    std::size_t labeled = 0, sarcastic = 0;
    for (const auto& r : bucket) {
      ids.push_back(r.review_id);
      if (auto it = resolved.find(r.review_id); it != resolved.end()) {
        ++labeled;
        sarcastic += it->second ? 1 : 0;
      }
    }
    json manifest = {{"stars", s},
                     {"count", bucket.size()},
                     {"labeled", labeled},
                     {"sarcastic", sarcastic},
                     {"review_ids", ids},
                     {"provenance", prov}};
    write_text(star_file(dir, s, ".bucket.json"), manifest.dump(1) + "\n");
    out << s << " star: " << bucket.size() << " reviews, " << labeled << " labeled, "
        << sarcastic << " sarcastic\n";
  }
  json summary = {{"reviews", c.reviews.size()},
                  {"review_errors", errors_json(c.review_errors)},
                  {"label_errors", errors_json(c.label_errors)},
                  {"unknown_label_ids", c.join.unknown_ids},
                  {"unlabeled", c.join.unlabeled},
                  {"provenance", prov}};
  write_text(dir / "ingest.json", summary.dump(1) + "\n");
  return kOk;
}

// --- label ----------------------------------------------------------------

int cmd_label(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  if (o.labels.empty()) throw UsageError("--labels is required");
  if (o.reviews.empty()) throw UsageError("--reviews is required");
  auto parsed = parse_review_file(o.reviews);
  std::set<std::string> done;
  if (fs::exists(o.labels)) {
    for (const auto& l : parse_label_file(o.labels).records)
      if (l.annotator == o.annotator) done.insert(l.review_id);
  }
  const auto wanted = stars_or_all(o);

  std::ofstream labels(o.labels, std::ios::app | std::ios::binary);
  if (!labels) throw DataError("cannot append to " + o.labels);
  std::size_t written = 0;
  for (const auto& r : parsed.records) {
    if (done.contains(r.review_id)) continue;
    if (std::find(wanted.begin(), wanted.end(), r.stars) == wanted.end()) continue;
    out << "\n[" << r.review_id << "] " << r.stars << " star\n" << r.text << '\n';
    std::optional<bool> answer;
    bool quit = false;
    while (true) {
      out << "sarcastic? [y]es/[n]o/[s]kip/[q]uit: " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        quit = true;
        break;
      }
      const auto b = line.find_first_not_of(" \t\r");
      const char ch = b == std::string::npos ? '\0' : static_cast<char>(std::tolower(line[b]));
      if (ch == 'y') answer = true;
      else if (ch == 'n') answer = false;
      else if (ch == 'q') quit = true;
      else if (ch != 's') continue;
      break;
    }
    if (quit) break;
    if (!answer) continue;
    labels << json{{"review_id", r.review_id}, {"sarcastic", *answer}, {"annotator", o.annotator}}
                  .dump()
           << '\n'
           << std::flush;
    if (!labels) throw DataError("append failed for " + o.labels);
    ++written;
  }
  out << "\nrecorded " << written << " label(s) for annotator " << o.annotator << '\n';
  (void)err;
  return kOk;
}

// --- extract --------------------------------------------------------------

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("--out is required");
  Corpus c = load_corpus(o, false, err);
  std::map<std::string, bool> resolved;
  for (const auto& lr : c.join.labeled) resolved[lr.review.review_id] = lr.sarcastic;
  const auto wanted = stars_or_all(o);
  std::vector<DumpRow> rows;
  for (const auto& r : c.reviews) {
    if (std::find(wanted.begin(), wanted.end(), r.stars) == wanted.end()) continue;
    std::optional<bool> label;
    if (auto it = resolved.find(r.review_id); it != resolved.end()) label = it->second;
    rows.push_back({r.review_id, label, r.text});
  }
  const FeaturePipeline pipeline(Lexicons::load_default());
  const auto skipped = write_feature_dump(pipeline, rows, o.out);
  out << "wrote " << rows.size() - skipped << " feature rows to " << o.out << '\n';
  if (skipped) err << "warning: " << skipped << " review(s) failed feature extraction\n";
  return kOk;
}

// --- train / eval / sweep -------------------------------------------------

struct Prepared {
  Corpus corpus;
  std::vector<int> stars;
  std::vector<DatasetSplit> splits;
};

Prepared prepare_splits(const Options& o, std::ostream& err) {
  Prepared p{load_corpus(o, true, err), stars_or_all(o), {}};
  const auto buckets = segregate_by_stars(p.corpus.join.labeled);
  for (int s : p.stars) {
    try {
      p.splits.push_back(make_split(buckets[s - 1], o.train_size, o.test_size, o.seed));
    } catch (const DataError& e) {
      throw DataError(std::to_string(s) + " star: " + e.what());
    }
    p.splits.back().stars = s;
  }
  return p;
}

// Runs fn(i) for each index with OpenMP; rethrows the first failure.
template <typename Fn>
void parallel_over(std::size_t n, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("--out is required");
  const TrainConfig config = train_config(o);
  Prepared p = prepare_splits(o, err);
  const FeaturePipeline pipeline(Lexicons::load_default());
  const fs::path dir = o.out;
  ensure_dir(dir);

  const json cfg = config_json(o, config);
  const json prov =
      stanza(o.seed, cfg,
             {{"corpus_digests", p.corpus.digests},
              {"lexicon_digest", pipeline.lexicons().digest()}});

  std::vector<TrainResult> results(p.splits.size());
  parallel_over(p.splits.size(), [&](std::size_t i) {
    results[i] = train(p.splits[i], p.corpus.join.labeled, pipeline, config);
  });

  for (std::size_t i = 0; i < p.splits.size(); ++i) {
    const int s = p.splits[i].stars;
    json star_prov = prov;
    star_prov["stars"] = s;
    save_model(results[i].model, star_file(dir, s, ".model"), star_prov);
    write_history(results[i].history, star_file(dir, s, ".history.jsonl"), star_prov);
    write_manifest(manifest_of(p.splits[i]), star_file(dir, s, ".split.json"));
    const auto& last = results[i].history.back();
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d star: final loss %.6f, train accuracy %.4f\n", s,
                  last.mean_loss, last.train_accuracy);
    out << buf;
  }
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.model.empty()) throw UsageError("--model is required (directory written by train)");
  const fs::path model_dir = o.model;
  Corpus corpus = load_corpus(o, true, err);
  const FeaturePipeline pipeline(Lexicons::load_default());

  std::vector<int> stars;
  if (o.stars.empty()) {
    for (int s = 1; s <= kNumStars; ++s)
      if (fs::exists(star_file(model_dir, s, ".model"))) stars.push_back(s);
    if (stars.empty()) throw DataError("no star*.model files in " + model_dir.string());
  } else {
    stars = stars_or_all(o);
  }

  std::vector<StarResult> results;
  json models = json::object();
  for (int s : stars) {
    const auto model_path = star_file(model_dir, s, ".model");
    const MlpModel model = load_model(model_path);
    models[std::to_string(s)] = sha256_file(model_path);
    const auto split =
        split_from_manifest(read_manifest(star_file(model_dir, s, ".split.json")),
                            corpus.join.labeled);
    const auto outcome = evaluate(model, split.test, pipeline);
    StarResult r{s, outcome.cm, prf1(outcome.cm), outcome.excluded, {}};
    if (const auto h = star_file(model_dir, s, ".history.jsonl"); fs::exists(h))
      r.history = read_history(h);
    results.push_back(std::move(r));
  }
  const json prov = stanza(o.seed, {{"stars", stars}},
                           {{"corpus_digests", corpus.digests},
                            {"model_digests", models},
                            {"lexicon_digest", pipeline.lexicons().digest()}});
  const EvalReport report = make_report(std::move(results), prov);
  const std::string table = render_table(report);
  const fs::path dir = o.out.empty() ? model_dir : fs::path(o.out);
  ensure_dir(dir);
  write_text(dir / "report.txt", "# version " + std::string(SARCASM_VERSION) +
                                     ", config digest " +
                                     prov["config_digest"].get<std::string>() + "\n" + table);
  write_text(dir / "report.json", report_to_json(report).dump(1) + "\n");
  out << table;
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("--out is required");
  const TrainConfig config = train_config(o);
  Prepared p = prepare_splits(o, err);
  const FeaturePipeline pipeline(Lexicons::load_default());

  std::vector<std::vector<SweepRow>> tables(p.splits.size());
  parallel_over(p.splits.size(), [&](std::size_t i) {
    tables[i] = lr_sweep(p.splits[i], p.corpus.join.labeled, pipeline, config);
  });

  const json prov = stanza(o.seed, config_json(o, config), {{"corpus_digests", p.corpus.digests}});
  std::ostringstream text;
  text << "# version " << SARCASM_VERSION << ", seed " << o.seed << ", config digest "
       << prov["config_digest"].get<std::string>() << '\n';
  text << "stars\trank\tlr\taccuracy\tprecision\trecall\tf1\n";
  char buf[256];
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t r = 0; r < tables[i].size(); ++r) {
      const auto& row = tables[i][r];
      std::snprintf(buf, sizeof buf, "%d\t%zu\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n",
                    p.splits[i].stars, r + 1, row.lr, row.metrics.accuracy,
                    row.metrics.precision, row.metrics.recall, row.metrics.f1);
      text << buf;
    }
  }
  write_text(o.out, text.str());
  out << text.str();
  return kOk;
}

// --- predict --------------------------------------------------------------

int cmd_predict(const Options& o, std::istream& in, std::ostream& out) {
  if (o.model.empty()) throw UsageError("--model is required");
  const MlpModel model = load_model(o.model);
  std::string text;
  if (!o.input.empty()) {
    text = read_file(o.input);
  } else {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  const FeaturePipeline pipeline(Lexicons::load_default());
  const auto pred = predict(model, pipeline.vector(text).span());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s\t%.6f\n",
                pred.label == kSarcastic ? "sarcastic" : "not_sarcastic", pred.confidence);
  out << buf;
  return kOk;
}

void add_corpus_flags(CLI::App* sub, Options& o, bool labels_required) {
  sub->add_option("--reviews", o.reviews, "Review file (JSON lines)")->required();
  auto* labels = sub->add_option("--labels", o.labels, "Label file (JSON lines)");
  if (labels_required) labels->required();
  sub->add_option("--stars", o.stars, "Star categories, comma separated (default all)")
      ->delimiter(',')
      ->check(CLI::Range(1, 5));
}

void add_training_flags(CLI::App* sub, Options& o) {
  sub->add_option("--train-size", o.train_size, "Training reviews per star")->capture_default_str();
  sub->add_option("--test-size", o.test_size, "Test reviews per star")->capture_default_str();
  sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sub->add_option("--lr", o.lr, "Learning rate")->capture_default_str();
  sub->add_option("--lr-decay", o.lr_decay, "Per-epoch learning-rate multiplier")
      ->capture_default_str();
  sub->add_option("--hidden", o.hidden, "Hidden layer widths (1 or 2, each 7..=15)")
      ->delimiter(',');
  sub->add_option("--epochs", o.epochs, "Epochs per stage")->capture_default_str();
  sub->add_option("--batch-size", o.batch_size, "Minibatch size")->capture_default_str();
  sub->add_option("--keep-prob", o.keep_prob, "Dropout keep probability")->capture_default_str();
  sub->add_option("--stages", o.stages,
                  "Curriculum: sarcastic:N,nonsarcastic:N[:RATIO],main")
      ->capture_default_str();
  sub->add_flag("--keep-adam", o.keep_adam, "Carry Adam moments across stages");
  sub->add_flag("--reshuffle", o.reshuffle, "Reshuffle batches every epoch");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Non-contextual sarcasm classifier for review text"};
  app.name(args.empty() ? "sarcasm" : fs::path(args[0]).filename().string());
  app.require_subcommand(1, 1);

  auto* ingest = app.add_subcommand("ingest", "Parse reviews and labels, write star buckets");
  add_corpus_flags(ingest, o, false);
  ingest->add_option("--out", o.out, "Output directory")->required();

  auto* label = app.add_subcommand("label", "Label reviews interactively (appends)");
  label->add_option("--reviews", o.reviews, "Review file (JSON lines)")->required();
  label->add_option("--labels", o.labels, "Label file to append to")->required();
  label->add_option("--stars", o.stars, "Star categories to label")
      ->delimiter(',')
      ->check(CLI::Range(1, 5));
  label->add_option("--annotator", o.annotator, "Annotator id")->capture_default_str();

  auto* extract = app.add_subcommand("extract", "Write the feature dump");
  add_corpus_flags(extract, o, false);
  extract->add_option("--out", o.out, "Feature dump path (CSV)")->required();

  auto* train_cmd = app.add_subcommand("train", "Train one model per star category");
  add_corpus_flags(train_cmd, o, true);
  add_training_flags(train_cmd, o);
  train_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate trained models on their test splits");
  add_corpus_flags(eval, o, true);
  eval->add_option("--model", o.model, "Directory written by train")->required();
  eval->add_option("--seed", o.seed, "Seed recorded in the report")->capture_default_str();
  eval->add_option("--out", o.out, "Report directory (default: model directory)");

  auto* predict_cmd = app.add_subcommand("predict", "Classify one text");
  predict_cmd->add_option("--model", o.model, "Model file")->required();
  predict_cmd->add_option("--input", o.input, "Text file (default: standard input)");

  auto* sweep = app.add_subcommand("sweep", "Learning-rate sweep");
  add_corpus_flags(sweep, o, true);
  add_training_flags(sweep, o);
  sweep->add_option("--lr-grid", o.lr_grid, "Learning rates, ascending")->delimiter(',');
  sweep->add_option("--out", o.out, "Ranked table path")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("sarcasm");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  auto* active = app.get_subcommands().front();
  try {
    if (active == ingest) return cmd_ingest(o, out, err);
    if (active == label) return cmd_label(o, in, out, err);
    if (active == extract) return cmd_extract(o, out, err);
    if (active == train_cmd) return cmd_train(o, out, err);
    if (active == eval) return cmd_eval(o, out, err);
    if (active == predict_cmd) return cmd_predict(o, in, out);
    if (active == sweep) return cmd_sweep(o, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const TrainingDiverged& e) {
    err << "training diverged: " << e.what() << '\n';
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}

}  // namespace sarcasm::cli
