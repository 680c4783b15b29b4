#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "discotk/cli.hpp"
#include "discotk/scores.hpp"

namespace fs = std::filesystem;
using namespace discotk;

namespace {

const fs::path kToy = DISCOTK_TOY_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("discotk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "discotk");
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Scores both toy systems of one language pair into seg/sys files.
  void score_toy(const std::string& lp, const std::string& system, const std::string& repr = "all") {
    ASSERT_EQ(run({"score", "--hyp", (kToy / lp / (system + ".trees")).string(), "--ref",
                   (kToy / lp / "ref.trees").string(), "--langpair", lp, "--repr", repr, "--out-seg",
                   path(lp + "." + system + ".seg"), "--out-sys", path(lp + "." + system + ".sys")}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, IdenticalFilesScoreOne) {
  const auto ref = (kToy / "de-en" / "ref.trees").string();
  ASSERT_EQ(run({"score", "--hyp", ref, "--ref", ref, "--langpair", "de-en", "--out-seg",
                 path("s.tsv"), "--out-sys", path("y.tsv")}),
            0)
      << err_.str();
  const auto m = read_segment_scores(path("s.tsv"));
  ASSERT_EQ(m.metric_ids().size(), 5u);
  const auto sys = read_system_scores(path("y.tsv"));
  for (const auto& id : m.metric_ids()) {
    for (const double x : m.group(id, "de-en")->systems.at("ref")) EXPECT_EQ(x, 1.0) << id;
    EXPECT_EQ(sys.at(id).at("de-en").systems.at("ref"), 1.0);
  }
  EXPECT_TRUE(fs::exists(path("s.tsv.manifest.json")));
}

TEST_F(Cli, AllRepresentationsGiveFiveRowsPerSegment) {
  score_toy("de-en", "sysA");
  const auto m = read_segment_scores(path("de-en.sysA.seg"));
  EXPECT_EQ(m.entry_count(), 5u * 50u);
  EXPECT_EQ(m.metric_ids().size(), 5u);
}

TEST_F(Cli, BlankHypothesisLineScoresZero) {
  score_toy("de-en", "sysD");
  const auto m = read_segment_scores(path("de-en.sysD.seg"));
  for (const auto& id : m.metric_ids()) EXPECT_EQ(m.at(id, "de-en", "sysD", 18), 0.0) << id;
  EXPECT_NE(err_.str().find("line 18"), std::string::npos) << err_.str();
}

TEST_F(Cli, ScoreRejectsLengthMismatch) {
  write("short.trees", "(EDU:R a)\n");
  EXPECT_EQ(run({"score", "--hyp", path("short.trees"), "--ref", (kToy / "de-en" / "ref.trees").string(),
                 "--langpair", "de-en", "--out-seg", path("s.tsv")}),
            1);
}

TEST_F(Cli, ScoreParseErrorNamesLine) {
  write("bad.trees", "(EDU:R a)\n(EDU:R b\n");
  EXPECT_EQ(run({"score", "--hyp", path("bad.trees"), "--ref", path("bad.trees"), "--langpair", "de-en", "--out-seg",
                 path("s.tsv")}),
            1);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
}

TEST_F(Cli, CombineSingleMetricIsPassThrough) {
  score_toy("de-en", "sysA");
  ASSERT_EQ(run({"combine", "--scores", path("de-en.sysA.seg"), "--metrics", "DR.lex1", "--out-metric", "DR.lex1",
                 "--out-seg", path("c.tsv")}),
            0)
      << err_.str();
  const auto in = read_segment_scores(path("de-en.sysA.seg"));
  const auto out = read_segment_scores(path("c.tsv"));
  EXPECT_EQ(*out.group("DR.lex1", "de-en"), *in.group("DR.lex1", "de-en"));
}

TEST_F(Cli, ZeroWeightsGiveOneHalf) {
  score_toy("de-en", "sysA", "nolex");
  write("w.tsv", "DR.nolex\t0\n");
  ASSERT_EQ(run({"combine", "--scores", path("de-en.sysA.seg"), "--weights", path("w.tsv"), "--out-seg",
                 path("c.tsv"), "--out-sys", path("cs.tsv")}),
            0)
      << err_.str();
  const auto seg = read_segment_scores(path("c.tsv"));
  for (const double x : seg.group("combined", "de-en")->systems.at("sysA")) EXPECT_EQ(x, 0.5);
  EXPECT_EQ(read_system_scores(path("cs.tsv")).at("combined").at("de-en").systems.at("sysA"), 0.0);
}

TEST_F(Cli, CombineOptionErrors) {
  score_toy("de-en", "sysA", "nolex");
  write("w.tsv", "DR.nolex\t1\n");
  EXPECT_EQ(run({"combine", "--scores", path("de-en.sysA.seg"), "--weights", path("w.tsv"), "--metrics", "DR.nolex",
                 "--out-seg", path("c.tsv")}),
            2);
  EXPECT_EQ(run({"combine", "--scores", path("de-en.sysA.seg"), "--metrics", "DR.bogus", "--out-seg", path("c.tsv")}),
            1);
  write("w2.tsv", "DR.bogus\t1\n");
  EXPECT_EQ(run({"combine", "--scores", path("de-en.sysA.seg"), "--weights", path("w2.tsv"), "--out-seg",
                 path("c.tsv")}),
            1);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"bogus"}), 2);
  EXPECT_EQ(run({"score", "--hyp", "x"}), 2);
  EXPECT_EQ(run({"score", "--hyp", path("missing"), "--ref", path("missing"), "--langpair", "de-en", "--out-seg",
                 path("s.tsv")}),
            1);
  EXPECT_EQ(run({"score", "--hyp", "a", "--ref", "b", "--langpair", "x", "--lambda", "0", "--out-seg", "s"}), 2);
  EXPECT_EQ(run({"score", "--hyp", "a", "--ref", "b", "--langpair", "x", "--repr", "lex9", "--out-seg", "s"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("score"), std::string::npos);
}

TEST_F(Cli, HelpDocumentsFileGrammars) {
  EXPECT_EQ(run({"score", "--help"}), 0);
  EXPECT_NE(out_.str().find("EDU"), std::string::npos) << out_.str();
  EXPECT_EQ(run({"eval", "--help"}), 0);
  EXPECT_NE(out_.str().find("langpair"), std::string::npos) << out_.str();
}

TEST_F(Cli, ReprPrintsOneLinePerTree) {
  write("t.trees", "(Elaboration:R (EDU:N a) (EDU:S b))\n\n");
  ASSERT_EQ(run({"repr", path("t.trees"), "--kind", "nolex"}), 0) << err_.str();
  EXPECT_EQ(out_.str(), "(Elaboration_ROOT (EDU_Nuc) (EDU_Sat))\n\n");
}

class CliPipeline : public Cli {
 protected:
  // Scores every toy system for both language pairs into one file per system.
  std::vector<std::string> score_all(const std::string& repr = "all") {
    std::vector<std::string> files;
    for (const std::string lp : {"de-en", "fr-en"})
      for (const std::string sys : {"sysA", "sysB", "sysC", "sysD"}) {
        score_toy(lp, sys, repr);
        files.push_back("--scores");
        files.push_back(path(lp + "." + sys + ".seg"));
      }
    return files;
  }

  std::string rankings() const { return (kToy / "rankings.tsv").string(); }
};

TEST_F(CliPipeline, TuneIsDeterministic) {
  auto args = score_all();
  std::vector<std::string> a = {"tune"};
  a.insert(a.end(), args.begin(), args.end());
  a.insert(a.end(), {"--rankings", rankings(), "--normalize", "--folds", "5", "--seed", "3"});
  auto first = a, second = a;
  first.insert(first.end(), {"--out", path("w1.tsv"), "--report", path("r1.tsv")});
  second.insert(second.end(), {"--out", path("w2.tsv"), "--report", path("r2.tsv")});
  ASSERT_EQ(run(first), 0) << err_.str();
  ASSERT_EQ(run(second), 0) << err_.str();
  EXPECT_EQ(slurp(path("w1.tsv")), slurp(path("w2.tsv")));
  EXPECT_EQ(slurp(path("r1.tsv")), slurp(path("r2.tsv")));
  EXPECT_NE(slurp(path("r1.tsv")).find("pooled"), std::string::npos);
  const auto m1 = nlohmann::json::parse(slurp(path("w1.tsv.manifest.json")));
  const auto m2 = nlohmann::json::parse(slurp(path("w2.tsv.manifest.json")));
  EXPECT_EQ(m1["inputs"], m2["inputs"]);
  EXPECT_EQ(m1["config"]["seed"], 3);
}

TEST_F(CliPipeline, TuneNamesMissingScore) {
  score_toy("de-en", "sysA", "nolex");
  EXPECT_EQ(run({"tune", "--scores", path("de-en.sysA.seg"), "--rankings", rankings(), "--out", path("w.tsv")}), 1);
  EXPECT_NE(err_.str().find("sysB"), std::string::npos) << err_.str();
}

TEST_F(CliPipeline, EvalOfHumanAgreeingMetricIsOne) {
  // A metric that scores each system by minus its human rank.
  std::ostringstream seg;
  std::ifstream in(rankings());
  std::map<std::tuple<std::string, std::string, int>, int> rank;
  for (std::string line; std::getline(in, line);) {
    std::istringstream f(line);
    std::string lp, s, doc, judge, items;
    std::getline(f, lp, '\t');
    std::getline(f, s, '\t');
    std::getline(f, doc, '\t');
    std::getline(f, judge, '\t');
    std::getline(f, items);
    std::istringstream it(items);
    for (std::string item; std::getline(it, item, ',');) {
      const auto eq = item.rfind('=');
      rank[{lp, item.substr(0, eq), std::stoi(s)}] = std::stoi(item.substr(eq + 1));
    }
  }
  for (const auto& [key, r] : rank)
    seg << "oracle\t" << std::get<0>(key) << "\ttest\t" << std::get<1>(key) << '\t' << std::get<2>(key) << '\t'
        << -r << '\n';
  write("oracle.tsv", seg.str());
  ASSERT_EQ(run({"eval", "--scores", path("oracle.tsv"), "--rankings", rankings(), "--out", path("r.tsv")}), 0)
      << err_.str();
  EXPECT_EQ(slurp(path("r.tsv")), "oracle\tde-en\ttau\t1\noracle\tfr-en\ttau\t1\noracle\tavg\ttau\t1\n");
}

TEST_F(CliPipeline, TiebreakIsIdempotentOnTieFreeScores) {
  std::ostringstream seg;
  int k = 0;
  for (const std::string lp : {"de-en", "fr-en"})
    for (const std::string sys : {"sysA", "sysB", "sysC", "sysD"})
      for (int s = 1; s <= 50; ++s) seg << "m\t" << lp << "\ttest\t" << sys << '\t' << s << '\t' << (k++ * 7919) % 401 << '\n';
  write("m.tsv", seg.str());
  std::vector<std::string> a = {"eval", "--scores", path("m.tsv"), "--rankings", rankings()};
  ASSERT_EQ(run(a), 0) << err_.str();
  const auto plain = out_.str();
  a.push_back("--tiebreak");
  ASSERT_EQ(run(a), 0) << err_.str();
  EXPECT_EQ(out_.str(), plain);
}

TEST_F(CliPipeline, TiebreakChangesTiedToyScores) {
  auto args = score_all("nolex");
  std::vector<std::string> a = {"eval"};
  a.insert(a.end(), args.begin(), args.end());
  a.insert(a.end(), {"--rankings", rankings()});
  ASSERT_EQ(run(a), 0) << err_.str();
  const auto plain = out_.str();
  a.push_back("--tiebreak");
  ASSERT_EQ(run(a), 0) << err_.str();
  EXPECT_NE(out_.str(), plain);
}

TEST_F(CliPipeline, SystemLevelPearsonAverages) {
  auto args = score_all("nolex");
  std::vector<std::string> a = {"eval"};
  a.insert(a.end(), args.begin(), args.end());
  a.insert(a.end(), {"--rankings", rankings(), "--stat", "pearson"});
  ASSERT_EQ(run(a), 0) << err_.str();
  std::istringstream rows(out_.str());
  std::map<std::string, double> v;
  for (std::string m, lp, stat, x; rows >> m >> lp >> stat >> x;) v[lp] = std::stod(x);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NEAR(v["avg"], (v["de-en"] + v["fr-en"]) / 2, 1e-11);
}
