#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stegcol/experiment.hpp"

using namespace stegcol::cli;
namespace fs = std::filesystem;

namespace {

using Overrides = std::map<std::string, std::string>;

const fs::path kRoot = fs::temp_directory_path() / "stegcol_test_cli";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream in(slurp(p));
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Runs the CLI binary; stderr goes to kRoot/stderr.txt.
int run(const std::string& args) {
  const std::string cmd = std::string(STEGCOL_BIN) + " " + args + " > /dev/null 2> " + (kRoot / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_stderr() { return slurp(kRoot / "stderr.txt"); }

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Fresh {
  Fresh() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
  }
};

}  // namespace

TEST_CASE("config parsing") {
  const auto c = Config::parse("# comment\n\nseed = 5\nout=x\n");
  CHECK(c.text("seed") == "5");
  CHECK(c.u64("seed") == 5);
  CHECK(c.text("out") == "x");
  CHECK_THROWS_AS(Config::parse("seed=1\nseed=2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("=3\n"), ConfigError);
  CHECK_THROWS_AS(c.integer("out"), ConfigError);
  CHECK_THROWS_AS(c.text("missing"), ConfigError);
}

TEST_CASE("config resolution and snapshot round trip") {
  const auto c = Config::resolve("bench", std::string("function=F9\ntrials=4\n"), Overrides{{"trials", "6"}});
  CHECK(c.text("function") == "F9");
  CHECK(c.integer("trials") == 6);
  CHECK(c.text("variants") == "classic,levy");
  CHECK(c.list("variants") == std::vector<std::string>{"classic", "levy"});
  CHECK_THROWS_AS(Config::resolve("bench", std::string("bogus=1\n"), {}), ConfigError);
  CHECK_THROWS_AS(Config::resolve("bench", std::nullopt, Overrides{{"bogus", "1"}}), ConfigError);
  CHECK_THROWS_AS(Config::resolve("nope", std::nullopt, {}), ConfigError);

  const std::string snap = c.serialize("bench");
  CHECK(snap.rfind("#", 0) == 0);
  const auto back = Config::resolve("bench", snap, {});
  CHECK(back.values() == c.values());
  CHECK(back.serialize("bench") == snap);
}

TEST_CASE("every command has seed and out keys") {
  for (const char* cmd : {"bench", "corpus", "steg"}) {
    bool seed = false, out = false;
    for (const auto& k : command_keys(cmd)) {
      seed |= k.name == "seed";
      out |= k.name == "out";
    }
    CHECK(seed);
    CHECK(out);
  }
}

TEST_CASE("csv floats round-trip") {
  CHECK(csv_real(0.1) == "0.10000000000000001");
  for (double v : {1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) CHECK(std::stod(csv_real(v)) == v);
}

TEST_CASE("atomic writes replace whole files") {
  Fresh fresh;
  write_file_atomic(kRoot / "a.txt", "first");
  write_file_atomic(kRoot / "a.txt", "second");
  CHECK(slurp(kRoot / "a.txt") == "second");
  for (const auto& e : fs::directory_iterator(kRoot)) CHECK(e.path().filename() == "a.txt");
}

TEST_CASE("bench command outputs") {
  Fresh fresh;
  const std::string base = "bench --function F9 --dimension 5 --trials 3 --iterations 20 --pack_size 6";
  REQUIRE(run(base + " --out " + (kRoot / "b1").string()) == 0);
  const auto traces = lines(kRoot / "b1" / "traces.csv");
  REQUIRE(!traces.empty());
  CHECK(traces[0] == "variant,seed,iteration,best_fitness");
  CHECK(traces.size() == 1 + 2 * 3 * 21);
  const auto stats = lines(kRoot / "b1" / "stats.csv");
  CHECK(stats[0] == "variant,mean,median,q1,q3,min,max");
  CHECK(stats.size() == 3);
  const auto ranksum = lines(kRoot / "b1" / "ranksum.csv");
  CHECK(ranksum[0] == "variant_a,variant_b,u,p");
  CHECK(ranksum.size() == 3);
  CHECK(fs::exists(kRoot / "b1" / kSnapshotName));

  // Re-run from the snapshot.
  REQUIRE(run("bench --config " + (kRoot / "b1" / kSnapshotName).string() + " --out " + (kRoot / "b2").string()) == 0);
  for (const char* f : {"traces.csv", "stats.csv", "ranksum.csv"})
    CHECK(slurp(kRoot / "b1" / f) == slurp(kRoot / "b2" / f));

  // One variant: no comparison rows.
  REQUIRE(run(base + " --variants levy --out " + (kRoot / "b3").string()) == 0);
  CHECK(lines(kRoot / "b3" / "ranksum.csv").size() == 1);
}

TEST_CASE("exit codes") {
  Fresh fresh;
  CHECK(run("corpus --payloads 1.5 --n_pairs 8 --width 16 --height 16 --out " + (kRoot / "c").string()) == 2);
  CHECK(last_stderr().find("payloads") != std::string::npos);
  CHECK(run("bench --function F3 --out " + (kRoot / "x").string()) == 2);
  CHECK(run("bench --iterations ten --out " + (kRoot / "x").string()) == 2);
  CHECK(run("bench --no-such-flag 1") == 2);
  CHECK(run("") == 2);
  write(kRoot / "bad.cfg", "function=F1\nwidth=3\n");
  CHECK(run("bench --config " + (kRoot / "bad.cfg").string()) == 2);
  CHECK(last_stderr().find("width") != std::string::npos);
  CHECK(run("bench --config " + (kRoot / "missing.cfg").string()) == 2);
  CHECK(run("steg --out " + (kRoot / "s").string()) == 2);

  // A regular file where the output directory should go.
  write(kRoot / "blocker", "x");
  CHECK(run("corpus --n_pairs 8 --width 16 --height 16 --out " + (kRoot / "blocker" / "sub").string()) == 1);
  CHECK(run("steg --manifest " + (kRoot / "nowhere.csv").string() + " --out " + (kRoot / "s").string()) == 1);
  CHECK(last_stderr().find("nowhere.csv") != std::string::npos);
}

TEST_CASE("corpus and steg end to end") {
  Fresh fresh;
  const fs::path corpus = kRoot / "corpus";
  REQUIRE(run("corpus --n_pairs 16 --width 32 --height 32 --payloads 0.2,0.4 --seed 3 --out " + corpus.string()) == 0);
  std::size_t ppm = 0;
  for (const auto& e : fs::recursive_directory_iterator(corpus)) ppm += e.path().extension() == ".ppm";
  CHECK(ppm == 48);
  CHECK(lines(corpus / "manifest.csv").size() == 1 + 48);

  REQUIRE(run("corpus --config " + (corpus / kSnapshotName).string() + " --out " + (kRoot / "corpus2").string()) == 0);
  for (const auto& e : fs::recursive_directory_iterator(corpus)) {
    if (!e.is_regular_file() || e.path().filename() == kSnapshotName) continue;
    CHECK(slurp(e.path()) == slurp(kRoot / "corpus2" / fs::relative(e.path(), corpus)));
  }

  const std::string steg = "steg --manifest " + (corpus / "manifest.csv").string() +
                           " --repeats 2 --sel_pack_size 4 --sel_iterations 2 --sel_epochs 20"
                           " --epochs 50 --dump_features true";
  REQUIRE(run(steg + " --selection both --out " + (kRoot / "s1").string()) == 0);
  const auto results = lines(kRoot / "s1" / "results.csv");
  REQUIRE(!results.empty());
  CHECK(results[0] == "repeat,payload,selection,n_features_selected,accuracy,tpr,tnr");
  CHECK(results.size() == 1 + 2 * 2 * 2);
  for (std::size_t i = 1; i < results.size(); ++i) {
    std::istringstream row(results[i]);
    std::vector<std::string> f;
    for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() == 7);
    const long n = std::stol(f[3]);
    if (f[2] == "off") CHECK(n == 1800);
    else CHECK((n >= 1 && n <= 1800));
    const double acc = std::stod(f[4]);
    CHECK((acc >= 0.0 && acc <= 1.0));
  }
  const auto summary = lines(kRoot / "s1" / "summary.csv");
  CHECK(summary[0] == "payload,selection,repeats,mean_n_features_selected,mean_accuracy,mean_tpr,mean_tnr");
  CHECK(summary.size() == 1 + 4);
  const auto features = lines(kRoot / "s1" / "features.csv");
  CHECK(features.size() == 1 + 48);

  REQUIRE(run("steg --config " + (kRoot / "s1" / kSnapshotName).string() + " --out " + (kRoot / "s2").string()) == 0);
  for (const char* f : {"results.csv", "summary.csv", "features.csv"})
    CHECK(slurp(kRoot / "s1" / f) == slurp(kRoot / "s2" / f));

  // Weighted averaging shrinks the vector to one colorspace's worth.
  REQUIRE(run(steg + " --selection off --aggregation weighted_average --out " + (kRoot / "s3").string()) == 0);
  const auto avg = lines(kRoot / "s3" / "results.csv");
  CHECK(avg[1].find(",300,") != std::string::npos);
  fs::remove_all(kRoot);
}
