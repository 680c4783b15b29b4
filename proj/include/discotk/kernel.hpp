#pragma once

// Subset-tree convolution kernel over ReprTrees. Fragments take each node
// with all or none of its children; when two fragments are compared, the
// nuclearity suffix of their roots is ignored.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discotk/repr.hpp"

namespace discotk {

struct KernelConfig {
  double lambda = 1.0;  // decay, in (0, 1]
  bool normalize = true;

  /// Throws std::invalid_argument when lambda is outside (0, 1].
  void validate() const;
};

struct KernelScore {
  double raw = 0.0;
  // raw / sqrt(self_a * self_b). Single-node trees have no fragments: two of
  // them score 1 when their labels match up to nuclearity, 0 otherwise, and
  // one against a larger tree scores 0.
  double normalized = 0.0;

  double value(const KernelConfig& cfg) const { return cfg.normalize ? normalized : raw; }
};

/// Removes a trailing _Nuc, _Sat or _ROOT. Property labels (those containing
/// ':') are returned unchanged; their nuclearity is content, not a role.
std::string_view strip_nuc(std::string_view label);

/// Raw kernel value only; no self-kernels are computed.
double tree_kernel_raw(const ReprTree& a, const ReprTree& b, double lambda = 1.0);

KernelScore tree_kernel(const ReprTree& a, const ReprTree& b, const KernelConfig& cfg = {});

/// Either side missing (blank input line) scores 0.
KernelScore tree_kernel(const std::optional<ReprTree>& a, const std::optional<ReprTree>& b,
                        const KernelConfig& cfg = {});

struct CorpusScore {
  std::vector<double> segments;
  double system = 0.0;
};

/// Segment i compares hyp[i] with ref[i]; the system score is the mean of the
/// segment scores. Throws DataError on a length mismatch.
CorpusScore kernel_score_corpus(std::span<const std::optional<ReprTree>> hyp,
                                std::span<const std::optional<ReprTree>> ref, const KernelConfig& cfg = {});

}  // namespace discotk
