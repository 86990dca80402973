#include "stegcol/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "stegcol/bench.hpp"
#include "stegcol/binsel.hpp"
#include "stegcol/classify.hpp"
#include "stegcol/features.hpp"
#include "stegcol/gwo.hpp"
#include "stegcol/stego.hpp"

namespace stegcol::cli {
namespace fs = std::filesystem;

namespace {

enum Purpose : std::uint64_t { kStegSplit = 0x4001, kStegSelect = 0x4002 };

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::vector<KeySpec> kBenchKeys = {
    {"function", "F1", "benchmark function: F1 or F9"},
    {"dimension", "30", "problem dimension"},
    {"variants", "classic,levy", "optimizer variants to compare"},
    {"trials", "10", "number of seeds; trial i runs with seed + i"},
    {"pack_size", "30", "wolves per pack"},
    {"iterations", "500", "iterations per run"},
    {"levy_mu", "0", "Levy location"},
    {"levy_gamma", "1", "Levy scale"},
    {"a_max", "3", "clamp on |A| for the levy variant"},
    {"workers", "1", "fitness evaluation threads"},
    {"seed", "1", "master seed"},
    {"out", "out/bench", "output directory"},
};

const std::vector<KeySpec> kCorpusKeys = {
    {"n_pairs", "200", "number of cover images"},
    {"width", "128", "image width"},
    {"height", "128", "image height"},
    {"payloads", "0.2,0.4", "embedding rates in bits per channel"},
    {"seed", "1", "master seed"},
    {"out", "out/corpus", "output directory"},
};

const std::vector<KeySpec> kStegKeys = {
    {"manifest", "", "corpus manifest.csv"},
    {"spaces", "RGB,HSV,YCbCr,YUV,XYZ,Lab", "colorspaces to extract"},
    {"aggregation", "concat", "concat or weighted_average"},
    {"weights", "", "per-colorspace weights; empty means uniform"},
    {"payloads", "", "payloads to evaluate; empty means all in the manifest"},
    {"selection", "off", "feature selection: off, on or both"},
    {"repeats", "10", "train/test repetitions"},
    {"resplit", "true", "draw a fresh cover-level split per repeat instead of the manifest split"},
    {"train_fraction", "0.75", "fraction of covers used for training when resplitting"},
    {"learning_rate", "0.1", "classifier learning rate"},
    {"epochs", "500", "classifier epochs"},
    {"l2", "0.0001", "classifier L2 penalty"},
    {"sel_error_weight", "0.99", "weight of cv error in the selection fitness"},
    {"sel_folds", "3", "cross-validation folds inside the selection fitness"},
    {"sel_pack_size", "8", "wolves used by feature selection"},
    {"sel_iterations", "10", "iterations used by feature selection"},
    {"sel_epochs", "100", "classifier epochs inside the selection fitness"},
    {"levy_mu", "0", "Levy location"},
    {"levy_gamma", "1", "Levy scale"},
    {"a_max", "3", "clamp on |A| for the levy variant"},
    {"workers", "1", "fitness evaluation threads"},
    {"dump_features", "false", "also write features.csv"},
    {"seed", "1", "master seed"},
    {"out", "out/steg", "output directory"},
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void prepare_output(const Config& config, std::string_view command, const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw std::runtime_error("cannot create output directory " + out.string() +
                             (ec ? ": " + ec.message() : std::string()));
  }
  write_file_atomic(out / kSnapshotName, config.serialize(command));
}

OptimizerConfig levy_settings(const Config& c, OptimizerConfig opt) {
  opt.levy = LevyParams{c.real("levy_mu"), c.real("levy_gamma")};
  opt.a_max = c.real("a_max");
  opt.workers = static_cast<int>(c.integer("workers"));
  require(opt.levy.gamma > 0.0, "levy_gamma must be > 0");
  require(opt.a_max > 0.0, "a_max must be > 0");
  require(opt.workers >= 1, "workers must be >= 1");
  return opt;
}

// ---------------------------------------------------------------- bench

struct BenchParams {
  std::string function;
  std::size_t dimension = 0;
  std::vector<GwoVariant> variants;
  std::size_t trials = 0;
  OptimizerConfig optimizer;
  fs::path out;
};

BenchParams bench_params(const Config& c) {
  BenchParams p;
  p.function = c.text("function");
  require(p.function == "F1" || p.function == "F9", "function must be F1 or F9");
  const long d = c.integer("dimension");
  require(d >= (p.function == "F9" ? 2 : 1), "dimension too small for " + p.function);
  p.dimension = static_cast<std::size_t>(d);
  std::set<std::string> seen;
  for (const auto& v : c.list("variants")) {
    require(v == "classic" || v == "levy", "unknown variant '" + v + "'");
    require(seen.insert(v).second, "duplicate variant '" + v + "'");
    p.variants.push_back(parse_variant(v));
  }
  require(!p.variants.empty(), "variants must not be empty");
  const long trials = c.integer("trials");
  require(trials >= 2, "trials must be >= 2");
  p.trials = static_cast<std::size_t>(trials);
  p.optimizer.pack_size = static_cast<int>(c.integer("pack_size"));
  p.optimizer.max_iterations = static_cast<int>(c.integer("iterations"));
  require(p.optimizer.pack_size >= 4, "pack_size must be >= 4");
  require(p.optimizer.max_iterations >= 1, "iterations must be >= 1");
  p.optimizer.seed = c.u64("seed");
  p.optimizer = levy_settings(c, p.optimizer);
  p.out = c.text("out");
  return p;
}

// ---------------------------------------------------------------- steg

enum class SelectionPlan { off, on, both };

struct StegParams {
  fs::path manifest;
  std::vector<ColorSpace> spaces;
  AggregationConfig aggregation;
  std::vector<double> payloads;
  SelectionPlan selection = SelectionPlan::off;
  int repeats = 0;
  bool resplit = true;
  double train_fraction = 0.75;
  TrainParams classifier;
  SelectionConfig selector;
  bool dump_features = false;
  std::uint64_t seed = 0;
  fs::path out;
};

StegParams steg_params(const Config& c) {
  StegParams p;
  p.manifest = c.text("manifest");
  require(!p.manifest.empty(), "manifest is required");
  std::set<ColorSpace> seen;
  for (const auto& s : c.list("spaces")) {
    ColorSpace cs;
    try {
      cs = parse_colorspace(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    require(seen.insert(cs).second, "duplicate colorspace '" + s + "'");
    p.spaces.push_back(cs);
  }
  require(!p.spaces.empty(), "spaces must not be empty");

  try {
    p.aggregation.mode = parse_aggregation(c.text("aggregation"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.aggregation.weights = c.reals("weights");
  if (p.aggregation.weights.empty()) {
    p.aggregation = AggregationConfig::uniform(p.aggregation.mode, p.spaces.size());
  }
  try {
    p.aggregation.validate(p.spaces.size());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  p.payloads = c.reals("payloads");
  for (double b : p.payloads) require(b >= 0.0 && b <= 1.0, "payloads must lie in [0, 1]");

  const std::string sel = c.text("selection");
  require(sel == "off" || sel == "on" || sel == "both", "selection must be off, on or both");
  p.selection = sel == "off" ? SelectionPlan::off : sel == "on" ? SelectionPlan::on : SelectionPlan::both;
  p.repeats = static_cast<int>(c.integer("repeats"));
  require(p.repeats >= 1, "repeats must be >= 1");
  p.resplit = c.flag("resplit");
  p.train_fraction = c.real("train_fraction");
  require(p.train_fraction > 0.0 && p.train_fraction < 1.0, "train_fraction must lie in (0, 1)");

  p.classifier = TrainParams{c.real("learning_rate"), static_cast<int>(c.integer("epochs")), c.real("l2")};
  require(p.classifier.learning_rate > 0.0, "learning_rate must be > 0");
  require(p.classifier.epochs >= 0, "epochs must be >= 0");
  require(p.classifier.l2 >= 0.0, "l2 must be >= 0");

  p.selector.error_weight = c.real("sel_error_weight");
  p.selector.folds = static_cast<int>(c.integer("sel_folds"));
  p.selector.classifier = p.classifier;
  p.selector.classifier.epochs = static_cast<int>(c.integer("sel_epochs"));
  p.selector.optimizer.variant = GwoVariant::levy;
  p.selector.optimizer.pack_size = static_cast<int>(c.integer("sel_pack_size"));
  p.selector.optimizer.max_iterations = static_cast<int>(c.integer("sel_iterations"));
  p.selector.optimizer = levy_settings(c, p.selector.optimizer);
  require(p.selector.optimizer.pack_size >= 4, "sel_pack_size must be >= 4");
  require(p.selector.optimizer.max_iterations >= 1, "sel_iterations must be >= 1");
  require(p.selector.classifier.epochs >= 1, "sel_epochs must be >= 1");
  try {
    p.selector.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  p.dump_features = c.flag("dump_features");
  p.seed = c.u64("seed");
  p.out = c.text("out");
  return p;
}

struct CoverRecord {
  std::string path;
  Split split = Split::train;
  std::map<double, std::string> stegos;  // bpc -> path
};

std::vector<double> image_features(const fs::path& path, const StegParams& p) {
  const ImageRGB img = load_ppm(path);
  const auto per_space = extract(img, p.spaces);
  return aggregate(per_space, p.spaces, p.aggregation).values;
}

Eigen::MatrixXd stack_rows(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[i].data(), static_cast<Eigen::Index>(rows[i].size()));
  }
  return m;
}

Dataset build_dataset(const Eigen::MatrixXd& covers, const Eigen::MatrixXd& stegos,
                      const std::vector<Eigen::Index>& rows) {
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(2 * rows.size()), covers.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.features.row(static_cast<Eigen::Index>(i)) = covers.row(rows[i]);
    d.features.row(static_cast<Eigen::Index>(rows.size() + i)) = stegos.row(rows[i]);
  }
  d.labels.assign(rows.size(), 0);
  d.labels.resize(2 * rows.size(), 1);
  return d;
}

struct ResultRow {
  int repeat = 0;
  double payload = 0.0;
  bool selection = false;
  std::size_t n_features = 0;
  EvalReport report;
};

}  // namespace

// ---------------------------------------------------------------- Config

const std::vector<KeySpec>& command_keys(std::string_view command) {
  if (command == "bench") return kBenchKeys;
  if (command == "corpus") return kCorpusKeys;
  if (command == "steg") return kStegKeys;
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key=value", line_no));
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", line_no));
    if (c.has(key)) throw ConfigError(fmt::format("config line {}: duplicate key '{}'", line_no, key));
    c.set(key, trim(std::string_view(t).substr(eq + 1)));
  }
  return c;
}

Config Config::resolve(std::string_view command, const std::optional<std::string>& file_text,
                       const std::map<std::string, std::string>& overrides) {
  const auto& keys = command_keys(command);
  auto known = [&](const std::string& k) {
    return std::any_of(keys.begin(), keys.end(), [&](const KeySpec& s) { return s.name == k; });
  };
  Config c;
  for (const auto& k : keys) c.set(k.name, k.default_value);
  if (file_text) {
    const Config file = parse(*file_text);
    for (const auto& [k, v] : file.values()) {
      if (!known(k)) throw ConfigError("unknown config key '" + k + "' for " + std::string(command));
      c.set(k, v);
    }
  }
  for (const auto& [k, v] : overrides) {
    if (!known(k)) throw ConfigError("unknown config key '" + k + "' for " + std::string(command));
    c.set(k, v);
  }
  return c;
}

const std::string& Config::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double Config::real(const std::string& key) const {
  const auto& v = text(key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

long Config::integer(const std::string& key) const {
  const auto& v = text(key);
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
}

std::uint64_t Config::u64(const std::string& key) const {
  const auto& v = text(key);
  if (!v.empty() && v.front() != '-') {
    try {
      std::size_t used = 0;
      const auto x = std::stoull(v, &used);
      if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
}

bool Config::flag(const std::string& key) const {
  const auto& v = text(key);
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  const auto& v = text(key);
  if (trim(v).empty()) return out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config key '" + key + "': empty list item");
    out.push_back(item);
  }
  return out;
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) {
    Config tmp;
    tmp.set(key, item);
    out.push_back(tmp.real(key));
  }
  return out;
}

std::string Config::serialize(std::string_view command) const {
  std::string out = fmt::format("# stegcol {} resolved configuration\n", command);
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

// ---------------------------------------------------------------- helpers

std::string csv_real(double value) { return fmt::format("{:.17g}", value); }

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

// ---------------------------------------------------------------- commands

void cmd_bench(const Config& config, std::ostream& log) {
  const BenchParams p = bench_params(config);
  prepare_output(config, "bench", p.out);
  const BenchmarkSpec spec = make_benchmark(p.function, p.dimension);

  std::vector<std::uint64_t> seeds(p.trials);
  for (std::size_t i = 0; i < p.trials; ++i) seeds[i] = p.optimizer.seed + i;

  std::string traces = "variant,seed,iteration,best_fitness\n";
  std::string stats = "variant,mean,median,q1,q3,min,max\n";
  std::vector<std::vector<double>> finals;
  for (GwoVariant v : p.variants) {
    log << "bench: " << spec.name << " d=" << p.dimension << " variant=" << to_string(v) << "\n";
    OptimizerConfig opt = p.optimizer;
    opt.variant = v;
    const auto trials = run_trials(spec, opt, seeds);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const auto& trace = trials.traces[s];
      for (std::size_t t = 0; t < trace.size(); ++t) {
        traces += fmt::format("{},{},{},{}\n", to_string(v), seeds[s], t, csv_real(trace[t]));
      }
    }
    const auto& st = trials.stats;
    stats += fmt::format("{},{},{},{},{},{},{}\n", to_string(v), csv_real(st.mean), csv_real(st.median),
                         csv_real(st.quartiles.first), csv_real(st.quartiles.second), csv_real(st.min),
                         csv_real(st.max));
    finals.push_back(st.per_seed_finals);
  }

  std::string ranksum = "variant_a,variant_b,u,p\n";
  for (std::size_t a = 0; a < p.variants.size(); ++a) {
    for (std::size_t b = 0; b < p.variants.size(); ++b) {
      if (a == b) continue;
      std::string u = "nan";
      std::string pv = "nan";
      try {
        const auto r = rank_sum_test(finals[a], finals[b]);
        u = csv_real(r.u_statistic);
        pv = csv_real(r.p_one_sided);
      } catch (const std::invalid_argument&) {
        // Degenerate samples (every final identical) have no defined test.
      }
      ranksum += fmt::format("{},{},{},{}\n", to_string(p.variants[a]), to_string(p.variants[b]), u, pv);
    }
  }

  write_file_atomic(p.out / "traces.csv", traces);
  write_file_atomic(p.out / "stats.csv", stats);
  write_file_atomic(p.out / "ranksum.csv", ranksum);
}

void cmd_corpus(const Config& config, std::ostream& log) {
  const long n_pairs = config.integer("n_pairs");
  const long width = config.integer("width");
  const long height = config.integer("height");
  const auto payloads = config.reals("payloads");
  const std::uint64_t seed = config.u64("seed");
  const fs::path out = config.text("out");
  require(n_pairs >= 8, "n_pairs must be >= 8");
  require(width >= 16 && height >= 16 && width <= 65536 && height <= 65536, "width and height must lie in [16, 65536]");
  require(!payloads.empty(), "payloads must not be empty");
  std::set<double> distinct;
  for (double b : payloads) {
    require(b >= 0.0 && b <= 1.0, "payloads must lie in [0, 1]");
    require(distinct.insert(b).second, "duplicate payload");
  }

  prepare_output(config, "corpus", out);
  log << "corpus: " << n_pairs << " covers, " << payloads.size() << " payloads\n";
  const auto manifest = gen_corpus(out, static_cast<int>(n_pairs), static_cast<int>(width),
                                   static_cast<int>(height), payloads, seed);
  write_file_atomic(out / "manifest.csv", manifest_to_csv(manifest));
}

void cmd_steg(const Config& config, std::ostream& log) {
  const StegParams p = steg_params(config);
  prepare_output(config, "steg", p.out);

  const fs::path base = p.manifest.parent_path();
  const auto manifest = manifest_from_csv(read_text(p.manifest));

  // Covers in order of first appearance, with their stegos per payload.
  std::vector<CoverRecord> covers;
  std::map<std::string, std::size_t> cover_index;
  std::vector<double> manifest_payloads;
  for (const auto& e : manifest.entries) {
    auto [it, inserted] = cover_index.emplace(e.cover_path, covers.size());
    if (inserted) covers.push_back(CoverRecord{e.cover_path, e.split, {}});
    auto& rec = covers[it->second];
    if (rec.split != e.split) throw std::runtime_error("manifest: cover " + e.cover_path + " appears in both splits");
    if (e.is_cover()) continue;
    if (!rec.stegos.emplace(e.bpc, e.stego_path).second) {
      throw std::runtime_error(fmt::format("manifest: cover {} has two stegos at bpc {}", e.cover_path, e.bpc));
    }
    if (std::find(manifest_payloads.begin(), manifest_payloads.end(), e.bpc) == manifest_payloads.end()) {
      manifest_payloads.push_back(e.bpc);
    }
  }
  const std::vector<double> payloads = p.payloads.empty() ? manifest_payloads : p.payloads;
  if (covers.size() < 4) throw std::runtime_error("manifest: need at least 4 covers");
  if (payloads.empty()) throw std::runtime_error("manifest: no stego entries");
  for (const auto& rec : covers) {
    if (!fs::exists(base / rec.path)) throw std::runtime_error("manifest: missing file " + (base / rec.path).string());
    for (double b : payloads) {
      const auto it = rec.stegos.find(b);
      if (it == rec.stegos.end()) {
        throw std::runtime_error(fmt::format("manifest: cover {} has no stego at bpc {}", rec.path, csv_real(b)));
      }
      if (!fs::exists(base / it->second)) {
        throw std::runtime_error("manifest: missing file " + (base / it->second).string());
      }
    }
  }

  log << "steg: extracting features for " << covers.size() << " covers\n";
  std::vector<std::vector<double>> cover_rows;
  for (const auto& rec : covers) cover_rows.push_back(image_features(base / rec.path, p));
  const Eigen::MatrixXd cover_x = stack_rows(cover_rows);
  std::vector<Eigen::MatrixXd> stego_x;
  for (double b : payloads) {
    std::vector<std::vector<double>> rows;
    for (const auto& rec : covers) rows.push_back(image_features(base / rec.stegos.at(b), p));
    stego_x.push_back(stack_rows(rows));
  }

  if (p.dump_features) {
    std::string csv = "path,label,bpc";
    for (const auto& name : feature_names(p.spaces, p.aggregation.mode)) csv += "," + name;
    csv += "\n";
    auto emit = [&](const std::string& path, int label, double bpc, const Eigen::MatrixXd& m, Eigen::Index row) {
      csv += fmt::format("{},{},{}", path, label, csv_real(bpc));
      for (Eigen::Index j = 0; j < m.cols(); ++j) csv += "," + csv_real(m(row, j));
      csv += "\n";
    };
    for (std::size_t i = 0; i < covers.size(); ++i) emit(covers[i].path, 0, 0.0, cover_x, static_cast<Eigen::Index>(i));
    for (std::size_t k = 0; k < payloads.size(); ++k) {
      for (std::size_t i = 0; i < covers.size(); ++i) {
        emit(covers[i].stegos.at(payloads[k]), 1, payloads[k], stego_x[k], static_cast<Eigen::Index>(i));
      }
    }
    write_file_atomic(p.out / "features.csv", csv);
  }

  std::vector<bool> modes;
  if (p.selection != SelectionPlan::on) modes.push_back(false);
  if (p.selection != SelectionPlan::off) modes.push_back(true);

  std::vector<ResultRow> results;
  const std::size_t n = covers.size();
  for (int r = 0; r < p.repeats; ++r) {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    if (p.resplit) {
      std::vector<Eigen::Index> order(n);
      std::iota(order.begin(), order.end(), 0);
      RngStream rng(mix_key(p.seed, {kStegSplit, static_cast<std::uint64_t>(r)}));
      for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
      const auto n_train = static_cast<std::size_t>(std::lround(p.train_fraction * static_cast<double>(n)));
      train_rows.assign(order.begin(), order.begin() + static_cast<long>(n_train));
      test_rows.assign(order.begin() + static_cast<long>(n_train), order.end());
      std::sort(train_rows.begin(), train_rows.end());
      std::sort(test_rows.begin(), test_rows.end());
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        (covers[i].split == Split::train ? train_rows : test_rows).push_back(static_cast<Eigen::Index>(i));
      }
    }
    if (train_rows.size() < 2 || test_rows.empty()) throw std::runtime_error("split leaves too few covers");

    for (std::size_t k = 0; k < payloads.size(); ++k) {
      const Dataset train_set = build_dataset(cover_x, stego_x[k], train_rows);
      const Dataset test_set = build_dataset(cover_x, stego_x[k], test_rows);
      for (bool selected : modes) {
        std::vector<Eigen::Index> cols(static_cast<std::size_t>(cover_x.cols()));
        std::iota(cols.begin(), cols.end(), 0);
        if (selected) {
          SelectionConfig sc = p.selector;
          sc.optimizer.seed = mix_key(p.seed, {kStegSelect, static_cast<std::uint64_t>(r), k});
          const auto sel = select_features(train_set, sc);
          cols.clear();
          for (std::size_t j : sel.mask.indices()) cols.push_back(static_cast<Eigen::Index>(j));
        }
        const Eigen::MatrixXd train_x = train_set.features(Eigen::all, cols);
        const Eigen::MatrixXd test_x = test_set.features(Eigen::all, cols);
        const auto model = train(train_x, train_set.labels, p.classifier);
        const auto report = evaluate(model, test_x, test_set.labels);
        log << fmt::format("steg: repeat {} bpc {} selection {} features {} accuracy {:.4f}\n", r,
                           payloads[k], selected ? "on" : "off", cols.size(), report.accuracy);
        results.push_back(ResultRow{r, payloads[k], selected, cols.size(), report});
      }
    }
  }

  std::string csv = "repeat,payload,selection,n_features_selected,accuracy,tpr,tnr\n";
  for (const auto& row : results) {
    csv += fmt::format("{},{},{},{},{},{},{}\n", row.repeat, csv_real(row.payload), row.selection ? "on" : "off",
                       row.n_features, csv_real(row.report.accuracy), csv_real(row.report.true_positive_rate),
                       csv_real(row.report.true_negative_rate));
  }
  std::string summary = "payload,selection,repeats,mean_n_features_selected,mean_accuracy,mean_tpr,mean_tnr\n";
  for (double b : payloads) {
    for (bool selected : modes) {
      double feats = 0.0, acc = 0.0, tpr = 0.0, tnr = 0.0;
      int count = 0;
      for (const auto& row : results) {
        if (row.payload != b || row.selection != selected) continue;
        feats += static_cast<double>(row.n_features);
        acc += row.report.accuracy;
        tpr += row.report.true_positive_rate;
        tnr += row.report.true_negative_rate;
        ++count;
      }
      summary += fmt::format("{},{},{},{},{},{},{}\n", csv_real(b), selected ? "on" : "off", count,
                             csv_real(feats / count), csv_real(acc / count), csv_real(tpr / count),
                             csv_real(tnr / count));
    }
  }
  write_file_atomic(p.out / "results.csv", csv);
  write_file_atomic(p.out / "summary.csv", summary);
}

int run_command(std::string_view command, const std::optional<fs::path>& config_path,
                const std::map<std::string, std::string>& overrides, std::ostream& log) {
  try {
    std::optional<std::string> text;
    if (config_path) {
      try {
        text = read_text(*config_path);
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
    }
    const Config config = Config::resolve(command, text, overrides);
    if (command == "bench") {
      cmd_bench(config, log);
    } else if (command == "corpus") {
      cmd_corpus(config, log);
    } else {
      cmd_steg(config, log);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace stegcol::cli
