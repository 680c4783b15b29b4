#include "discotk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "discotk/error.hpp"

namespace discotk {

namespace {

constexpr int kNoProduction = -1;

// Nodes in post-order, so every child index precedes its parent.
struct FlatTree {
  std::vector<int> label;       // full label id
  std::vector<int> production;  // kNoProduction for leaves
  std::vector<std::vector<int>> children;
};

class Interner {
 public:
  int label(std::string_view s) {
    auto [it, inserted] = labels_.try_emplace(std::string(s), static_cast<int>(labels_.size()));
    return it->second;
  }

  int production(std::vector<int> key) {
    auto [it, inserted] = productions_.try_emplace(std::move(key), static_cast<int>(productions_.size()));
    return it->second;
  }

 private:
  std::unordered_map<std::string, int> labels_;
  std::map<std::vector<int>, int> productions_;
};

int flatten(const ReprNode& node, Interner& interner, FlatTree& out) {
  std::vector<int> kids;
  kids.reserve(node.children.size());
  for (const auto& c : node.children) kids.push_back(flatten(c, interner, out));

  int production = kNoProduction;
  if (!kids.empty()) {
    std::vector<int> key;
    key.reserve(kids.size() + 1);
    key.push_back(interner.label(strip_nuc(node.label)));
    for (const int k : kids) key.push_back(out.label[k]);
    production = interner.production(std::move(key));
  }
  out.label.push_back(interner.label(node.label));
  out.production.push_back(production);
  out.children.push_back(std::move(kids));
  return static_cast<int>(out.label.size()) - 1;
}

double delta_sum(const FlatTree& a, const FlatTree& b, double lambda) {
  const std::size_t nb = b.label.size();
  std::unordered_map<int, std::vector<int>> by_production;
  for (std::size_t j = 0; j < nb; ++j)
    if (b.production[j] != kNoProduction) by_production[b.production[j]].push_back(static_cast<int>(j));

  std::vector<double> delta(a.label.size() * nb, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < a.label.size(); ++i) {
    if (a.production[i] == kNoProduction) continue;
    const auto it = by_production.find(a.production[i]);
    if (it == by_production.end()) continue;
    const auto& ca = a.children[i];
    for (const int j : it->second) {
      const auto& cb = b.children[j];
      double d = lambda;
      for (std::size_t k = 0; k < ca.size(); ++k) d *= 1.0 + delta[ca[k] * nb + cb[k]];
      delta[i * nb + j] = d;
      total += d;
    }
  }
  return total;
}

}  // namespace

void KernelConfig::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("kernel decay must lie in (0, 1]");
}

std::string_view strip_nuc(std::string_view label) {
  if (label.find(':') != std::string_view::npos) return label;
  for (const std::string_view suffix : {"_Nuc", "_Sat", "_ROOT"}) {
    if (label.size() > suffix.size() && label.ends_with(suffix))
      return label.substr(0, label.size() - suffix.size());
  }
  return label;
}

double tree_kernel_raw(const ReprTree& a, const ReprTree& b, double lambda) {
  Interner interner;
  FlatTree fa, fb;
  flatten(a.root, interner, fa);
  flatten(b.root, interner, fb);
  return delta_sum(fa, fb, lambda);
}

KernelScore tree_kernel(const ReprTree& a, const ReprTree& b, const KernelConfig& cfg) {
  cfg.validate();
  KernelScore score;
  score.raw = tree_kernel_raw(a, b, cfg.lambda);
  if (!cfg.normalize) return score;
  const double self_a = tree_kernel_raw(a, a, cfg.lambda);
  const double self_b = tree_kernel_raw(b, b, cfg.lambda);
  if (self_a > 0.0 && self_b > 0.0) {
    score.normalized = std::clamp(score.raw / std::sqrt(self_a * self_b), 0.0, 1.0);
  } else if (self_a == 0.0 && self_b == 0.0) {
    // Only single-node trees have no fragments; equal ones are identical inputs.
    score.normalized = strip_nuc(a.root.label) == strip_nuc(b.root.label) ? 1.0 : 0.0;
  }
  return score;
}

KernelScore tree_kernel(const std::optional<ReprTree>& a, const std::optional<ReprTree>& b,
                        const KernelConfig& cfg) {
  cfg.validate();
  if (!a || !b) return {};
  return tree_kernel(*a, *b, cfg);
}

CorpusScore kernel_score_corpus(std::span<const std::optional<ReprTree>> hyp,
                                std::span<const std::optional<ReprTree>> ref, const KernelConfig& cfg) {
  if (hyp.size() != ref.size())
    throw DataError("hypothesis has " + std::to_string(hyp.size()) + " segments, reference has " +
                    std::to_string(ref.size()));
  CorpusScore out;
  out.segments.reserve(hyp.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    const double s = tree_kernel(hyp[i], ref[i], cfg).value(cfg);
    out.segments.push_back(s);
    sum += s;
  }
  out.system = hyp.empty() ? 0.0 : sum / static_cast<double>(hyp.size());
  return out;
}

}  // namespace discotk
