#include "discotk/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "discotk/dtree.hpp"
#include "discotk/error.hpp"
#include "discotk/eval.hpp"
#include "discotk/judge.hpp"
#include "discotk/kernel.hpp"
#include "discotk/manifest.hpp"
#include "discotk/repr.hpp"
#include "discotk/scores.hpp"
#include "discotk/tiebreak.hpp"
#include "discotk/tuner.hpp"

namespace discotk::cli {

namespace {

constexpr const char* kTreeGrammar =
    "Tree files: one tree per line, line i = segment i; a blank line is a missing tree (scores 0).\n"
    "  node := '(' LABEL ':' N|S|R ws child+ ')'   child := node | TOKEN\n"
    "  Leaves are (EDU:<nuc> tok tok ...); the root has nuclearity R.\n"
    "  Escape '(' ')' ':' '\\' and space inside tokens with a backslash.";

constexpr const char* kScoreGrammar =
    "Segment scores: metric<TAB>langpair<TAB>testset<TAB>system<TAB>segment<TAB>score\n"
    "System scores:  metric<TAB>langpair<TAB>testset<TAB>system<TAB>score";

constexpr const char* kRankingGrammar =
    "Rankings: langpair<TAB>segment<TAB>document<TAB>judge<TAB>sys1=rank1,sys2=rank2,...\n"
    "  rank 1 is best; equal ranks are ties; an empty document falls back to the segment id.";

constexpr const char* kWeightGrammar = "Weights: metric<TAB>weight, one row per feature in schema order.";

constexpr const char* kReportGrammar =
    "Report: metric<TAB>langpair<TAB>statistic<TAB>value; langpair 'avg' holds the mean over language pairs.";

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

ScoreMatrix load_scores(const std::vector<std::string>& paths, RunManifest& manifest) {
  ScoreMatrix m;
  for (const auto& p : paths) {
    m.merge(read_segment_scores(p));
    manifest.add_input(p);
  }
  return m;
}

RankingFile load_rankings(const std::string& path, RunManifest& manifest, std::ostream& err) {
  auto file = read_rankings(path);
  manifest.add_input(path);
  for (const auto& w : file.warnings) err << "warning: " << w << '\n';
  return file;
}

// ---------------------------------------------------------------- score

struct ScoreOptions {
  std::string hyp, ref, repr = "all", prefix = "DR", langpair, testset = "test", system, out_seg, out_sys;
  double lambda = 1.0;
  bool raw = false;
};

void cmd_score(const ScoreOptions& o, std::ostream& err) {
  KernelConfig cfg{o.lambda, !o.raw};
  cfg.validate();

  std::vector<ReprKind> kinds;
  if (o.repr == "all") {
    kinds.assign(std::begin(kAllReprKinds), std::end(kAllReprKinds));
  } else if (const auto k = parse_repr_kind(o.repr)) {
    kinds.push_back(*k);
  } else {
    throw std::invalid_argument("unknown representation '" + o.repr + "'");
  }

  auto load = [&](const std::string& path) {
    TreeFile f;
    try {
      f = read_tree_file(path);
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
    for (const auto& w : f.warnings) err << "warning: " << path << ": " << w << '\n';
    for (std::size_t i = 0; i < f.trees.size(); ++i)
      if (!f.trees[i]) err << "warning: " << path << ": line " << i + 1 << " is blank; segment scores 0\n";
    return f;
  };
  const auto hyp = load(o.hyp);
  const auto ref = load(o.ref);
  if (hyp.trees.size() != ref.trees.size())
    throw DataError("line count mismatch: '" + o.hyp + "' has " + std::to_string(hyp.trees.size()) + " lines, '" +
                    o.ref + "' has " + std::to_string(ref.trees.size()));

  const std::string system = o.system.empty() ? std::filesystem::path(o.hyp).stem().string() : o.system;

  ScoreMatrix m;
  for (const auto kind : kinds) {
    auto convert = [kind](const TreeFile& f) {
      std::vector<std::optional<ReprTree>> out;
      out.reserve(f.trees.size());
      for (const auto& t : f.trees) out.push_back(t ? std::optional(to_repr(*t, kind)) : std::nullopt);
      return out;
    };
    const auto scored = kernel_score_corpus(convert(hyp), convert(ref), cfg);
    ScoreGroup g;
    g.testset = o.testset;
    g.systems.emplace(system, scored.segments);
    m.set_group(o.prefix + "." + std::string(repr_name(kind)), o.langpair, std::move(g));
  }

  RunManifest manifest;
  manifest.command = "score";
  manifest.add_input(o.hyp);
  manifest.add_input(o.ref);
  manifest.config = {{"repr", o.repr},   {"lambda", o.lambda},   {"normalize", !o.raw}, {"prefix", o.prefix},
                     {"langpair", o.langpair}, {"testset", o.testset}, {"system", system}};

  auto seg = open_output(o.out_seg);
  write_segment_scores(seg, m);
  manifest.write_for(o.out_seg);
  if (!o.out_sys.empty()) {
    auto sys = open_output(o.out_sys);
    write_system_scores(sys, system_means(m));
    manifest.write_for(o.out_sys);
  }
}

// -------------------------------------------------------------- combine

struct CombineOptions {
  std::vector<std::string> scores, metrics;
  std::string weights, out_metric = "combined", out_seg, out_sys;
  bool normalize = false;
};

void cmd_combine(const CombineOptions& o) {
  RunManifest manifest;
  manifest.command = "combine";
  ScoreMatrix m = load_scores(o.scores, manifest);
  if (o.normalize) m = minmax_normalize(m);

  ScoreMatrix seg_scores;
  SystemScores sys_scores;
  if (!o.weights.empty()) {
    const auto w = read_weights(o.weights);
    manifest.add_input(o.weights);
    for (const auto& id : w.schema)
      if (!m.has_metric(id)) throw DataError("schema mismatch: weight file names metric '" + id + "' absent from scores");
    seg_scores = combine(m, w.schema, o.out_metric, [&](std::span<const double> f) { return predict_segment(w, f); });
    const auto raw = combine(m, w.schema, o.out_metric, [&](std::span<const double> f) { return w.dot(f); });
    sys_scores = system_means(raw);
    manifest.config["weights"] = std::filesystem::path(o.weights).filename().string();
  } else {
    const auto metrics = split_list(o.metrics);
    seg_scores = combine_uniform(m, metrics, o.out_metric);
    sys_scores = system_means(seg_scores);
    manifest.config["metrics"] = metrics;
  }
  manifest.config["normalize"] = o.normalize;
  manifest.config["out_metric"] = o.out_metric;

  auto seg = open_output(o.out_seg);
  write_segment_scores(seg, seg_scores);
  manifest.write_for(o.out_seg);
  if (!o.out_sys.empty()) {
    auto sys = open_output(o.out_sys);
    write_system_scores(sys, sys_scores);
    manifest.write_for(o.out_sys);
  }
}

// ----------------------------------------------------------------- tune

struct TuneOptions {
  std::vector<std::string> scores, metrics;
  std::string rankings, out, report, tie_policy = "discordant";
  TrainConfig train;
  std::size_t folds = 0;
  bool normalize = false;
};

void cmd_tune(const TuneOptions& o, std::ostream& stdout_, std::ostream& err) {
  const auto policy = parse_tie_policy(o.tie_policy);
  if (!policy) throw std::invalid_argument("unknown tie policy '" + o.tie_policy + "'");
  o.train.validate();

  RunManifest manifest;
  manifest.command = "tune";
  ScoreMatrix m = load_scores(o.scores, manifest);
  if (o.normalize) m = minmax_normalize(m);
  const auto rankings = load_rankings(o.rankings, manifest, err);

  FeatureSchema schema = o.metrics.empty() ? m.metric_ids() : split_list(o.metrics);
  for (const auto& id : schema)
    if (!m.has_metric(id)) throw DataError("unknown metric '" + id + "'");

  const auto pairs = expand_pairs(rankings.records);
  const auto result = train(build_instances(pairs, m, schema), schema, o.train);
  if (!result.converged)
    err << "warning: optimiser stopped at the epoch cap (" << o.train.max_epochs << ") before converging\n";

  manifest.config = {{"metrics", schema},      {"normalize", o.normalize},        {"l2", o.train.l2},
                     {"epochs", o.train.max_epochs}, {"tolerance", o.train.tolerance}, {"seed", o.train.seed},
                     {"folds", o.folds},        {"tie_policy", o.tie_policy}};

  auto out = open_output(o.out);
  write_weights(out, result.weights);
  manifest.write_for(o.out);

  if (o.folds > 0) {
    const auto folds = make_folds(rankings.records, o.folds, o.train.seed);
    if (folds.imbalance() > 0.2)
      err << "warning: fold sizes deviate from the mean by up to " << folds.imbalance() * 100.0 << "%\n";
    const auto cv = crossval_tau(m, rankings.records, folds, schema, o.train, TauConfig{*policy});
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < cv.fold_tau.size(); ++i)
      rows.push_back({"tuned", "fold-" + std::to_string(i + 1), "tau", cv.fold_tau[i]});
    rows.push_back({"tuned", "pooled", "tau", cv.pooled_tau});
    if (o.report.empty()) {
      write_report(stdout_, rows);
    } else {
      auto rep = open_output(o.report);
      write_report(rep, rows);
      manifest.write_for(o.report);
    }
  }
}

// ----------------------------------------------------------------- eval

struct EvalOptions {
  std::vector<std::string> scores, metrics, system_scores;
  std::string rankings, stat = "tau", tie_policy = "discordant", out;
  bool tiebreak = false;
};

void cmd_eval(const EvalOptions& o, std::ostream& stdout_, std::ostream& err) {
  const auto policy = parse_tie_policy(o.tie_policy);
  if (!policy) throw std::invalid_argument("unknown tie policy '" + o.tie_policy + "'");
  if (o.stat != "tau" && o.stat != "pearson" && o.stat != "spearman")
    throw std::invalid_argument("unknown statistic '" + o.stat + "'");

  RunManifest manifest;
  manifest.command = "eval";
  const ScoreMatrix m = load_scores(o.scores, manifest);
  SystemScores given;
  for (const auto& p : o.system_scores) {
    for (auto& [metric, lps] : read_system_scores(p))
      for (auto& [lp, g] : lps)
        if (!given[metric].emplace(lp, std::move(g)).second)
          throw DataError("duplicate system scores for (" + metric + ", " + lp + ")");
    manifest.add_input(p);
  }
  const auto rankings = load_rankings(o.rankings, manifest, err);
  const auto pairs = expand_pairs(rankings.records);

  std::set<std::string> langpairs;
  for (const auto& p : pairs) langpairs.insert(p.langpair);
  if (langpairs.empty()) throw DataError("rankings contain no strict pairwise preferences");

  const auto metrics = o.metrics.empty() ? m.metric_ids() : split_list(o.metrics);
  std::vector<ReportRow> rows;
  for (const auto& metric : metrics) {
    if (!m.has_metric(metric)) throw DataError("unknown metric '" + metric + "'");
    std::vector<double> per_lp;

    if (o.stat == "tau") {
      const ScoreMatrix scored = o.tiebreak ? break_ties(m, metric).scores : m;
      for (const auto& lp : langpairs) {
        std::vector<PairwiseJudgment> lp_pairs;
        for (const auto& p : pairs)
          if (p.langpair == lp) lp_pairs.push_back(p);
        const auto tau = kendall_tau(lp_pairs, scored, metric, TauConfig{*policy});
        if (!tau) throw DataError("metric '" + metric + "' has no evaluable pairs on " + lp);
        rows.push_back({metric, lp, "tau", *tau});
        per_lp.push_back(*tau);
      }
    } else {
      const auto means = system_means(m);
      for (const auto& lp : langpairs) {
        const auto* group = m.group(metric, lp);
        if (!group) throw DataError("metric '" + metric + "' has no scores for " + lp);
        const SystemGroup* sys = nullptr;
        if (const auto it = given.find(metric); it != given.end() && it->second.count(lp)) sys = &it->second.at(lp);
        else sys = &means.at(metric).at(lp);

        std::vector<std::string> systems;
        for (const auto& [name, _] : sys->systems) systems.push_back(name);
        const auto human = human_system_scores(pairs, lp, systems);
        for (const auto& s : human.excluded)
          err << "warning: " << lp << ": system '" << s << "' has no strict human comparison; excluded\n";

        std::vector<double> x, y;
        for (const auto& [name, score] : sys->systems) {
          const auto h = human.scores.find(name);
          if (h == human.scores.end()) continue;
          x.push_back(score);
          y.push_back(h->second);
        }
        const auto r = o.stat == "pearson" ? pearson(x, y) : spearman(x, y);
        if (!r) throw DataError("metric '" + metric + "' on " + lp + ": correlation undefined (constant scores)");
        rows.push_back({metric, lp, o.stat, *r});
        per_lp.push_back(*r);
      }
    }
    rows.push_back({metric, "avg", o.stat, average_over_langpairs(per_lp)});
  }

  manifest.config = {{"metrics", metrics}, {"stat", o.stat}, {"tie_policy", o.tie_policy}, {"tiebreak", o.tiebreak}};
  if (o.out.empty()) {
    write_report(stdout_, rows);
  } else {
    auto out = open_output(o.out);
    write_report(out, rows);
    manifest.write_for(o.out);
  }
}

// ----------------------------------------------------------------- repr

struct ReprOptions {
  std::string input, kind = "lex1";
};

void cmd_repr(const ReprOptions& o, std::ostream& out, std::ostream& err) {
  const auto kind = parse_repr_kind(o.kind);
  if (!kind) throw std::invalid_argument("unknown representation '" + o.kind + "'");
  const auto file = read_tree_file(o.input);
  for (const auto& w : file.warnings) err << "warning: " << w << '\n';
  for (const auto& t : file.trees) {
    if (t) out << serialize_repr(to_repr(*t, *kind));
    out << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discourse-tree kernel metrics for MT evaluation, metric combination and correlation analysis"};
  app.require_subcommand(1);
  app.footer(std::string(kTreeGrammar) + "\n" + kScoreGrammar + "\n" + kRankingGrammar + "\n" + kWeightGrammar +
             "\n" + kReportGrammar);

  ScoreOptions so;
  auto* score = app.add_subcommand("score", "Kernel similarity of hypothesis vs reference discourse trees");
  score->add_option("--hyp", so.hyp, "Hypothesis tree file")->required();
  score->add_option("--ref", so.ref, "Reference tree file")->required();
  score->add_option("--repr", so.repr, "nolex, lex1, lex1.1, lex2, lex2.1 or all")->capture_default_str();
  score->add_option("--lambda", so.lambda, "Kernel decay in (0,1]")->capture_default_str();
  score->add_flag("--raw", so.raw, "Report raw kernel values instead of normalized ones");
  score->add_option("--metric-id-prefix", so.prefix, "Metric ids are <prefix>.<repr>")->capture_default_str();
  score->add_option("--langpair", so.langpair, "Language pair, e.g. cs-en")->required();
  score->add_option("--testset", so.testset, "Test set name")->capture_default_str();
  score->add_option("--system", so.system, "System id (default: hypothesis file stem)");
  score->add_option("--out-seg", so.out_seg, "Segment score TSV to write")->required();
  score->add_option("--out-sys", so.out_sys, "System score TSV to write");
  score->footer(std::string(kTreeGrammar) + "\n" + kScoreGrammar);

  CombineOptions co;
  auto* comb = app.add_subcommand("combine", "Uniform or weighted combination of metric scores");
  comb->add_option("--scores", co.scores, "Segment score TSV (repeatable)")->required();
  auto* metrics_opt = comb->add_option("--metrics", co.metrics, "Comma-separated metrics to average");
  auto* weights_opt = comb->add_option("--weights", co.weights, "Weight file from `tune`");
  metrics_opt->excludes(weights_opt);
  comb->add_flag("--normalize", co.normalize, "Min-max normalize each metric per language pair first");
  comb->add_option("--out-metric", co.out_metric, "Metric id of the combination")->capture_default_str();
  comb->add_option("--out-seg", co.out_seg, "Segment score TSV to write")->required();
  comb->add_option("--out-sys", co.out_sys, "System score TSV to write");
  comb->footer(std::string(kScoreGrammar) + "\n" + kWeightGrammar +
               "\nWith --weights, segment scores are sigmoid(w.f) and system scores the mean raw w.f.");

  TuneOptions to;
  auto* tune = app.add_subcommand("tune", "Learn combination weights from human pairwise preferences");
  tune->add_option("--scores", to.scores, "Segment score TSV (repeatable)")->required();
  tune->add_option("--rankings", to.rankings, "Human rankings TSV")->required();
  tune->add_option("--metrics", to.metrics, "Comma-separated feature metrics (default: all)");
  tune->add_flag("--normalize", to.normalize, "Min-max normalize each metric per language pair first");
  tune->add_option("--l2", to.train.l2, "L2 regularization strength")->capture_default_str();
  tune->add_option("--epochs", to.train.max_epochs, "Epoch cap")->capture_default_str();
  tune->add_option("--tol", to.train.tolerance, "Objective improvement tolerance")->capture_default_str();
  tune->add_option("--seed", to.train.seed, "Seed for fold assignment")->capture_default_str();
  tune->add_option("--folds", to.folds, "Also report k-fold cross-validated tau");
  tune->add_option("--tie-policy", to.tie_policy, "discordant or excluded")->capture_default_str();
  tune->add_option("--out", to.out, "Weight file to write")->required();
  tune->add_option("--report", to.report, "Cross-validation report TSV (default: stdout)");
  tune->footer(std::string(kScoreGrammar) + "\n" + kRankingGrammar + "\n" + kWeightGrammar + "\n" + kReportGrammar);

  EvalOptions eo;
  auto* ev = app.add_subcommand("eval", "Correlate metric scores with human judgments");
  ev->add_option("--scores", eo.scores, "Segment score TSV (repeatable)")->required();
  ev->add_option("--rankings", eo.rankings, "Human rankings TSV")->required();
  ev->add_option("--metrics", eo.metrics, "Comma-separated metrics (default: all)");
  ev->add_option("--system-scores", eo.system_scores, "System score TSV overriding segment means (repeatable)");
  ev->add_option("--stat", eo.stat, "tau, pearson or spearman")->capture_default_str();
  ev->add_option("--tie-policy", eo.tie_policy, "discordant or excluded")->capture_default_str();
  ev->add_flag("--tiebreak", eo.tiebreak, "Break segment ties by system-level perturbation before tau");
  ev->add_option("--out", eo.out, "Report TSV to write (default: stdout)");
  ev->footer(std::string(kScoreGrammar) + "\n" + kRankingGrammar + "\n" + kReportGrammar);

  ReprOptions ro;
  auto* rep = app.add_subcommand("repr", "Print a kernel representation of every tree in a file");
  rep->add_option("trees", ro.input, "Tree file")->required();
  rep->add_option("--kind", ro.kind, "nolex, lex1, lex1.1, lex2 or lex2.1")->capture_default_str();
  rep->footer(kTreeGrammar);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*score) cmd_score(so, err);
    else if (*comb) {
      if (co.metrics.empty() && co.weights.empty()) throw std::invalid_argument("combine needs --metrics or --weights");
      cmd_combine(co);
    } else if (*tune) cmd_tune(to, out, err);
    else if (*ev) cmd_eval(eo, out, err);
    else if (*rep) cmd_repr(ro, out, err);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

}  // namespace discotk::cli
