// poc_cli: synthetic data, calibration, training, compression, evaluation
// and benchmarking from the command line.
//
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 reader or I/O error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "poc/http_reader.hpp"
#include "poc/poc.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags keyed "section.key"; config files and POC_SECTION_KEY variables
// supply the same keys.
class Flags {
 public:
  void add(CLI::App* app, const std::string& name, const std::string& key, const std::string& help,
           const std::string& fallback = {}, bool numeric = false, bool is_path = false) {
    auto* opt = app->add_option(name, raw_[key], help);
    if (is_path) paths_.insert(key);
    if (!fallback.empty()) opt->default_str(fallback);
    if (numeric) opt->check(CLI::Number);
    options_[key] = opt;
    defaults_[key] = fallback;
  }

  void load(poc::RunConfig& cfg) const {
    for (const auto& [key, opt] : options_)
      if (opt->count() > 0) cfg.set_flag(key, raw_.at(key));
  }

 private:
  std::map<std::string, std::string> raw_;
  std::map<std::string, CLI::Option*> options_;
  std::map<std::string, std::string> defaults_;
  std::set<std::string> paths_;

  friend class Settings;
};

class Settings {
 public:
  Settings(poc::RunConfig cfg, const Flags& flags, std::string command)
      : cfg_(std::move(cfg)), flags_(flags), command_(std::move(command)) {}

  std::string str(const std::string& key) const { return cfg_.get_or(key, fallback(key)); }

  std::string required(const std::string& key, const std::string& flag) const {
    auto v = str(key);
    if (v.empty()) throw UsageError(command_ + ": " + flag + " is required");
    return v;
  }

  double dbl(const std::string& key) const {
    if (!has(key) && fallback(key).empty()) throw UsageError(command_ + ": no value for " + key);
    return has(key) ? cfg_.get_double(key, 0.0) : std::stod(fallback(key));
  }

  std::size_t uint(const std::string& key) const {
    if (!has(key) && fallback(key).empty()) throw UsageError(command_ + ": no value for " + key);
    return static_cast<std::size_t>(has(key) ? cfg_.get_uint(key, 0) : std::stoull(fallback(key)));
  }

  bool has(const std::string& key) const { return cfg_.get(key).has_value(); }

  std::uint64_t seed() const { return cfg_.get_uint("run.seed", 0); }
  std::size_t workers() const { return static_cast<std::size_t>(cfg_.get_uint("run.workers", 1)); }

  // Hash of every effective setting except file locations, so the same run
  // written to another directory carries the same header.
  std::string config_hash() const {
    std::uint64_t h = poc::fnv1a("poc-run|" + command_);
    for (const auto& [k, v] : cfg_.effective())
      if (!flags_.paths_.contains(k)) h = poc::fnv1a(k + "=" + v + "\n", h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  poc::OutputHeader header(const std::string& kind) const { return {kind, config_hash(), seed()}; }

 private:
  std::string fallback(const std::string& key) const {
    auto it = flags_.defaults_.find(key);
    return it == flags_.defaults_.end() ? std::string{} : it->second;
  }

  poc::RunConfig cfg_;
  const Flags& flags_;
  std::string command_;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number in list: '" + item + "'");
    }
  }
  return out;
}

double checked_floor(double floor) {
  if (!(floor >= 0.0 && floor <= 1.0))
    throw UsageError("--floor must lie in the range [0,1], got " + poc::format_double(floor));
  return floor;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw poc::IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw poc::IoError("write failed: " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw poc::IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw poc::DataError(path + ": " + e.what());
  }
}

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw poc::IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string feature_hash() { return poc::feature_config_hash(poc::FeatureConfig{}, poc::ImportanceConfig{}); }

std::unique_ptr<poc::RetentionPredictor> load_predictor(const std::string& kind, const std::string& model_path) {
  if (model_path.empty()) throw UsageError("--model is required for the " + kind + " predictor");
  const auto j = read_json(model_path);
  if (kind == "agnostic") return std::make_unique<poc::AgnosticRetentionPredictor>(poc::AgnosticPredictor::from_json(j));
  if (kind == "aware")
    return std::make_unique<poc::AwareRetentionPredictor>(poc::AwareModel::from_json(j, feature_hash()));
  throw UsageError("unknown predictor '" + kind + "' (expected agnostic or aware)");
}

std::unique_ptr<poc::ReaderOracle> make_reader(const Settings& s, const std::string& section,
                                               const std::vector<poc::DatasetRecord>& data) {
  const auto kind = s.str(section + ".reader");
  if (kind == "synthetic-needle") return std::make_unique<poc::SyntheticNeedleReader>();
  if (kind == "synthetic-coverage") return std::make_unique<poc::SyntheticCoverageReader>();
  if (kind == "synthetic") {
    const bool all_qa = std::all_of(data.begin(), data.end(), [](const auto& r) { return r.task_kind == poc::TaskKind::qa; });
    const bool all_summ =
        std::all_of(data.begin(), data.end(), [](const auto& r) { return r.task_kind == poc::TaskKind::summarization; });
    if (all_qa) return std::make_unique<poc::SyntheticNeedleReader>();
    if (all_summ) return std::make_unique<poc::SyntheticCoverageReader>();
    throw poc::DataError("dataset mixes qa and summarization records; pick --reader explicitly");
  }
  if (kind == "http") {
    poc::HttpReaderConfig hc;
    hc.endpoint = s.required(section + ".endpoint", "--endpoint");
    hc.timeout_seconds = s.dbl(section + ".timeout");
    hc.max_attempts = s.uint(section + ".max_attempts");
    return std::make_unique<poc::HttpReader>(hc);
  }
  throw UsageError("unknown reader '" + kind + "'");
}

void add_reader_flags(Flags& f, CLI::App* app, const std::string& section) {
  f.add(app, "--reader", section + ".reader", "synthetic | synthetic-needle | synthetic-coverage | http", "synthetic");
  f.add(app, "--endpoint", section + ".endpoint", "reader URL for --reader http");
  f.add(app, "--timeout", section + ".timeout", "reader timeout in seconds", "30", true);
  f.add(app, "--max-attempts", section + ".max_attempts", "reader attempts per query", "3", true);
  f.add(app, "--metric", section + ".metric", "f1 | em | rouge", "f1");
}

int cmd_gen(const Settings& s) {
  poc::CorpusConfig cc;
  if (!s.has("run.seed")) throw UsageError("gen: --seed is required for synthetic data");
  cc.kind = poc::parse_synthetic_kind(s.str("gen.kind"));
  cc.count = s.uint("gen.count");
  cc.seed = s.seed();
  cc.min_length = s.uint("gen.min_length");
  cc.max_length = s.uint("gen.max_length");
  cc.min_needle_length = s.uint("gen.min_needle");
  cc.max_needle_length = s.uint("gen.max_needle");
  cc.max_decoy_fraction = s.dbl("gen.max_decoy_fraction");
  cc.distractor_fraction = s.dbl("gen.distractor_fraction");
  cc.min_salient_fraction = s.dbl("gen.min_salient");
  cc.max_salient_fraction = s.dbl("gen.max_salient");
  cc.chunk_size = s.uint("gen.chunk_size");
  cc.dataset_tag = s.str("gen.tag");
  std::vector<poc::DatasetRecord> records;
  for (auto& sample : poc::gen_corpus(cc)) records.push_back(std::move(sample.record));
  const auto out = s.required("gen.out", "--out");
  poc::write_dataset(out, records, s.header("dataset"));
  std::cerr << "wrote " << records.size() << " records to " << out << '\n';
  return 0;
}

int cmd_collect(const Settings& s) {
  const auto data = poc::load_dataset(s.required("collect.dataset", "--dataset"));
  const auto reader = make_reader(s, "collect", data);
  poc::CollectionOptions opt;
  const auto sampler = s.str("collect.sampler");
  if (sampler == "grid") opt.sampler.kind = poc::RatioSampler::Kind::grid;
  else if (sampler == "uniform") opt.sampler.kind = poc::RatioSampler::Kind::uniform;
  else throw UsageError("unknown sampler '" + sampler + "' (expected grid or uniform)");
  opt.sampler.n = s.uint("collect.ratios");
  opt.sampler.seed = s.seed();
  opt.metric = poc::parse_metric(s.str("collect.metric"));
  opt.workers = s.workers();
  opt.chunk_size = s.uint("collect.chunk_size");
  opt.output_path = s.required("collect.out", "--out");
  opt.resume = s.str("collect.resume") != "false";
  opt.header = s.header("calibration");
  const auto res = poc::collect_calibration(data, *reader, opt);
  for (const auto& [id, why] : res.failed) std::cerr << "failed " << id << ": " << why << '\n';
  std::cerr << "collected " << res.records.size() << " records (" << res.skipped_existing << " already present, "
            << res.failed.size() << " failed, " << res.reader_calls << " reader calls)\n";
  return res.records.empty() && res.skipped_existing == 0 ? 3 : 0;
}

int cmd_calibrate(const Settings& s) {
  const auto recs = poc::load_calibration(s.required("calibrate.calibration", "--calibration"));
  std::vector<double> knots = s.has("calibrate.knots") ? parse_list(s.str("calibrate.knots")) : poc::ratios_union(recs);
  const auto pred = poc::calibrate_agnostic(recs, knots, s.str("calibrate.dataset_id"));
  auto j = pred.to_json();
  j["header"] = s.header("agnostic-predictor").to_json();
  write_json(s.required("calibrate.out", "--out"), j);
  return 0;
}

int cmd_train(const Settings& s) {
  const auto recs = poc::load_calibration(s.required("train.calibration", "--calibration"));
  poc::TrainingConfig tc;
  tc.hidden = s.uint("train.hidden");
  tc.learning_rate = s.dbl("train.lr");
  tc.batch_size = s.uint("train.batch_size");
  tc.weight_decay = s.dbl("train.weight_decay");
  tc.epochs = s.uint("train.epochs");
  tc.warmup_fraction = s.dbl("train.warmup");
  tc.train_fraction = s.dbl("train.train_fraction");
  tc.seed = s.seed();
  const auto res = poc::train_aware(recs, tc);
  auto j = res.model.to_json(feature_hash());
  j["header"] = s.header("aware-model").to_json();
  j["training"] = {{"best_epoch", res.best_epoch},
                   {"best_validation_ppe", res.best_validation_ppe},
                   {"initial_train_mse", res.initial_train_mse},
                   {"train_records", res.train_ids.size()},
                   {"validation_records", res.validation_ids.size()}};
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : res.log)
    log.push_back({{"epoch", e.epoch}, {"train_mse", e.train_mse}, {"validation_ppe", e.validation_ppe}});
  j["training"]["log"] = log;
  write_json(s.required("train.out", "--out"), j);
  std::cerr << "best validation PPE " << res.best_validation_ppe << " at epoch " << res.best_epoch << '\n';
  return 0;
}

int cmd_compress(const Settings& s) {
  if (!s.has("compress.floor")) throw UsageError("compress: --floor is required");
  const double floor = checked_floor(s.dbl("compress.floor"));
  const auto predictor = load_predictor(s.str("compress.predictor"), s.str("compress.model"));
  const auto text = read_text(s.required("compress.input", "--input"));
  poc::PocOptions opt;
  opt.chunk_size = s.uint("compress.chunk_size");
  const auto res = poc::poc_compress(text, floor, *predictor, opt);
  const auto out = s.str("compress.out");
  if (out.empty() || out == "-") {
    std::cout << res.text << '\n';
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw poc::IoError("cannot write " + out);
    f << res.text << '\n';
  }
  if (s.has("compress.report")) {
    auto j = res.report.to_json();
    j["header"] = s.header("compression-report").to_json();
    write_json(s.str("compress.report"), j);
  }
  std::cerr << "kept " << res.report.kept_tokens << " of " << res.report.total_tokens << " tokens\n";
  return 0;
}

int cmd_evaluate(const Settings& s) {
  const auto data = poc::load_dataset(s.required("evaluate.dataset", "--dataset"));
  const auto reader = make_reader(s, "evaluate", data);
  const auto policy_name = s.str("evaluate.policy");
  std::unique_ptr<poc::RetentionPredictor> predictor;
  poc::ParPolicy policy = poc::FixedRatioPolicy{};
  if (policy_name == "poc") {
    predictor = load_predictor(s.str("evaluate.predictor"), s.str("evaluate.model"));
    policy = poc::PocPolicy{predictor.get()};
  } else if (policy_name != "fixed") {
    throw UsageError("unknown policy '" + policy_name + "' (expected poc or fixed)");
  }
  const auto floors = parse_list(s.str("evaluate.floors"));
  for (double f : floors) checked_floor(f);
  poc::ParOptions opt;
  opt.metric = poc::parse_metric(s.str("evaluate.metric"));
  opt.workers = s.workers();
  opt.chunk_size = s.uint("evaluate.chunk_size");
  const auto par = poc::evaluate_par(policy, data, floors, *reader, opt);
  auto j = par.to_json();
  j["header"] = s.header("par").to_json();
  j["policy"] = policy_name;
  if (predictor) j["predictor"] = predictor->kind();
  j["metric"] = poc::metric_name(opt.metric);
  j["records"] = data.size();
  write_json(s.str("evaluate.out"), j);
  if (s.has("evaluate.curve")) {
    const auto h = s.header("par");
    poc::emit_par_curve(par, s.str("evaluate.curve"),
                        {"tool_version=" + std::string(poc::kToolVersion), "config_hash=" + h.config_hash,
                         "seed=" + std::to_string(h.seed)});
  }
  std::cerr << "P@R " << par.par_value << '\n';
  return 0;
}

int cmd_curves(const Settings& s) {
  const auto recs = poc::load_calibration(s.required("curves.calibration", "--calibration"));
  const auto h = s.header("curves");
  const auto out = poc::emit_curves(recs, s.required("curves.out_dir", "--out-dir"), s.uint("curves.samples"),
                                    {"tool_version=" + std::string(poc::kToolVersion), "config_hash=" + h.config_hash,
                                     "seed=" + std::to_string(h.seed)});
  for (const auto& f : out.mean_files) std::cerr << "wrote " << f << '\n';
  for (const auto& f : out.sample_files) std::cerr << "wrote " << f << '\n';
  return 0;
}

int cmd_bench(const Settings& s) {
  const auto which = s.str("bench.component");
  std::vector<poc::BenchComponent> comps;
  if (which == "all")
    comps = {poc::BenchComponent::predictor, poc::BenchComponent::compressor, poc::BenchComponent::pipeline};
  else
    comps.push_back(poc::parse_bench_component(which));
  const auto tokens = s.uint("bench.chunk_tokens");
  const auto runs = s.uint("bench.runs");
  if (runs == 0) throw UsageError("bench: --runs must be positive");
  nlohmann::json results = nlohmann::json::array();
  const auto stats = poc::latency_bench_interleaved(comps, tokens, runs, s.uint("bench.warmup"));
  for (std::size_t k = 0; k < comps.size(); ++k) results.push_back(poc::latency_json(comps[k], tokens, stats[k]));
  write_json(s.str("bench.out"), {{"header", s.header("bench").to_json()}, {"results", results}});
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Performance-oriented context compression toolkit"};
  app.set_version_flag("--version", std::string(poc::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  std::string config_path;
  app.add_option("--config", config_path, "INI config file; flags override it, POC_* variables override both");
  f.add(&app, "--seed", "run.seed", "random seed", "0", true);
  f.add(&app, "--workers", "run.workers", "parallel workers for collect and evaluate", "1", true);

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset (JSONL)");
  f.add(gen, "--kind", "gen.kind", "needle-qa | coverage-summ", "needle-qa");
  f.add(gen, "--count", "gen.count", "number of records", "100", true);
  f.add(gen, "--out", "gen.out", "output JSONL path", "", false, true);
  f.add(gen, "--min-length", "gen.min_length", "minimum context tokens", "128", true);
  f.add(gen, "--max-length", "gen.max_length", "maximum context tokens", "512", true);
  f.add(gen, "--min-needle", "gen.min_needle", "minimum needle length", "1", true);
  f.add(gen, "--max-needle", "gen.max_needle", "maximum needle length", "5", true);
  f.add(gen, "--max-decoy-fraction", "gen.max_decoy_fraction", "upper bound on decoys per token", "0.5", true);
  f.add(gen, "--distractor-fraction", "gen.distractor_fraction", "distractor tokens per token (needle-qa)", "0", true);
  f.add(gen, "--min-salient", "gen.min_salient", "minimum salient fraction (coverage-summ)", "0.5", true);
  f.add(gen, "--max-salient", "gen.max_salient", "maximum salient fraction (coverage-summ)", "0.5", true);
  f.add(gen, "--chunk-size", "gen.chunk_size", "chunk size the layout is computed for", "512", true);
  f.add(gen, "--tag", "gen.tag", "dataset tag (defaults to the kind)");

  auto* collect = app.add_subcommand("collect", "collect calibration records (JSONL)");
  f.add(collect, "--dataset", "collect.dataset", "dataset JSONL", "", false, true);
  f.add(collect, "--out", "collect.out", "calibration JSONL; existing records are kept and skipped", "", false, true);
  f.add(collect, "--sampler", "collect.sampler", "grid | uniform", "grid");
  f.add(collect, "--ratios", "collect.ratios", "ratios sampled per record (r=1 is always added)", "10", true);
  f.add(collect, "--chunk-size", "collect.chunk_size", "tokens per chunk", "512", true);
  f.add(collect, "--resume", "collect.resume", "true | false", "true");
  add_reader_flags(f, collect, "collect");

  auto* calibrate = app.add_subcommand("calibrate", "fit the context-agnostic predictor");
  f.add(calibrate, "--calibration", "calibrate.calibration", "calibration JSONL", "", false, true);
  f.add(calibrate, "--out", "calibrate.out", "predictor JSON path", "", false, true);
  f.add(calibrate, "--knots", "calibrate.knots", "comma-separated knot ratios (default: all sampled ratios)");
  f.add(calibrate, "--dataset-id", "calibrate.dataset_id", "label stored with the predictor", "default");

  auto* train = app.add_subcommand("train", "train the context-aware predictor");
  f.add(train, "--calibration", "train.calibration", "calibration JSONL", "", false, true);
  f.add(train, "--out", "train.out", "model JSON path", "", false, true);
  f.add(train, "--hidden", "train.hidden", "hidden units", "32", true);
  f.add(train, "--lr", "train.lr", "peak learning rate", "0.001", true);
  f.add(train, "--batch-size", "train.batch_size", "rows per step", "256", true);
  f.add(train, "--weight-decay", "train.weight_decay", "decoupled weight decay", "0.01", true);
  f.add(train, "--epochs", "train.epochs", "epochs", "60", true);
  f.add(train, "--warmup", "train.warmup", "warmup fraction of all steps", "0.02", true);
  f.add(train, "--train-fraction", "train.train_fraction", "share of records used for training", "0.98", true);

  auto* compress = app.add_subcommand("compress", "compress one text to a performance floor");
  f.add(compress, "--input", "compress.input", "text file, or - for stdin", "", false, true);
  f.add(compress, "--floor", "compress.floor", "performance floor in [0,1]", "", true);
  f.add(compress, "--predictor", "compress.predictor", "agnostic | aware", "aware");
  f.add(compress, "--model", "compress.model", "predictor JSON from calibrate or train", "", false, true);
  f.add(compress, "--out", "compress.out", "compressed text path (default stdout)", "", false, true);
  f.add(compress, "--report", "compress.report", "per-chunk decision JSON path", "", false, true);
  f.add(compress, "--chunk-size", "compress.chunk_size", "tokens per chunk", "512", true);

  auto* evaluate = app.add_subcommand("evaluate", "P@R sweep over a dataset");
  f.add(evaluate, "--dataset", "evaluate.dataset", "dataset JSONL", "", false, true);
  f.add(evaluate, "--policy", "evaluate.policy", "poc | fixed", "poc");
  f.add(evaluate, "--predictor", "evaluate.predictor", "agnostic | aware", "aware");
  f.add(evaluate, "--model", "evaluate.model", "predictor JSON (poc policy)", "", false, true);
  f.add(evaluate, "--floors", "evaluate.floors", "comma-separated floors (or ratios for the fixed policy)",
        "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95");
  f.add(evaluate, "--out", "evaluate.out", "result JSON path (default stdout)", "", false, true);
  f.add(evaluate, "--curve", "evaluate.curve", "fitted curve CSV path", "", false, true);
  f.add(evaluate, "--chunk-size", "evaluate.chunk_size", "tokens per chunk", "512", true);
  add_reader_flags(f, evaluate, "evaluate");

  auto* curves = app.add_subcommand("curves", "write performance-compression curves as CSV");
  f.add(curves, "--calibration", "curves.calibration", "calibration JSONL", "", false, true);
  f.add(curves, "--out-dir", "curves.out_dir", "output directory", "", false, true);
  f.add(curves, "--samples", "curves.samples", "per-sample curves per dataset tag", "3", true);

  auto* bench = app.add_subcommand("bench", "latency of predictor, compressor and pipeline");
  f.add(bench, "--component", "bench.component", "predictor | compressor | pipeline | all", "all");
  f.add(bench, "--chunk-tokens", "bench.chunk_tokens", "tokens per chunk", "512", true);
  f.add(bench, "--runs", "bench.runs", "timed runs", "100", true);
  f.add(bench, "--warmup", "bench.warmup", "untimed warmup runs", "10", true);
  f.add(bench, "--out", "bench.out", "result JSON path (default stdout)", "", false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << poc::kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 1;
  }

  poc::RunConfig cfg = config_path.empty() ? poc::RunConfig{} : poc::RunConfig::from_file(config_path);
  f.load(cfg);
  const auto* sub = app.get_subcommands().front();
  const Settings s(cfg, f, sub->get_name());
  const auto& name = sub->get_name();
  if (name == "gen") return cmd_gen(s);
  if (name == "collect") return cmd_collect(s);
  if (name == "calibrate") return cmd_calibrate(s);
  if (name == "train") return cmd_train(s);
  if (name == "compress") return cmd_compress(s);
  if (name == "evaluate") return cmd_evaluate(s);
  if (name == "curves") return cmd_curves(s);
  if (name == "bench") return cmd_bench(s);
  throw UsageError("unknown subcommand " + name);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const poc::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const poc::ReaderError& e) {
    std::cerr << "reader error: " << e.what() << '\n';
    return 3;
  } catch (const poc::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
