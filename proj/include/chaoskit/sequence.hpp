#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaoskit/errors.hpp"

namespace chaoskit {

enum class SequenceKind { arith, explicit_list, witness };

/// A strictly increasing sequence of iterate indices {q_i}, indexed from i = 0.
///
/// `arith` is q_i = start + step * i. `explicit_list` and `witness` carry a
/// finite list; a witness additionally records where each of its runs ends
/// (cumulative lengths), which serve as natural density checkpoints.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::arith;
  std::uint64_t step = 1;
  std::uint64_t start = 0;
  std::vector<std::uint64_t> indices;
  std::vector<std::uint64_t> run_ends;
  std::optional<std::uint64_t> gap_bound;

  static SequenceSpec arith(std::uint64_t step, std::uint64_t start = 0) {
    SequenceSpec q;
    q.kind = SequenceKind::arith;
    q.step = step;
    q.start = start;
    q.gap_bound = step;
    q.validate();
    return q;
  }

  static SequenceSpec identity() { return arith(1, 0); }

  static SequenceSpec explicit_list(std::vector<std::uint64_t> indices,
                                    std::optional<std::uint64_t> gap_bound = std::nullopt) {
    SequenceSpec q;
    q.kind = SequenceKind::explicit_list;
    q.indices = std::move(indices);
    q.gap_bound = gap_bound;
    q.validate();
    return q;
  }

  static SequenceSpec witness(std::vector<std::uint64_t> indices, std::vector<std::uint64_t> run_ends) {
    SequenceSpec q;
    q.kind = SequenceKind::witness;
    q.indices = std::move(indices);
    q.run_ends = std::move(run_ends);
    q.validate();
    return q;
  }

  bool is_identity() const { return kind == SequenceKind::arith && step == 1 && start == 0; }

  /// Every q_i < limit, in order.
  std::vector<std::uint64_t> materialize(std::uint64_t limit) const {
    std::vector<std::uint64_t> out;
    if (kind == SequenceKind::arith) {
      for (std::uint64_t v = start; v < limit; v += step) out.push_back(v);
    } else {
      for (auto v : indices) {
        if (v >= limit) break;
        out.push_back(v);
      }
    }
    return out;
  }

  /// True when some listed index is >= limit (arith sequences are infinite and never report this).
  bool truncated_by(std::uint64_t limit) const {
    return kind != SequenceKind::arith && !indices.empty() && indices.back() >= limit;
  }

  /// Largest consecutive gap among q_i < limit (0 if fewer than two terms).
  std::uint64_t max_gap(std::uint64_t limit) const {
    const auto q = materialize(limit);
    std::uint64_t g = 0;
    for (std::size_t i = 1; i < q.size(); ++i) g = std::max(g, q[i] - q[i - 1]);
    return g;
  }

  void validate() const {
    if (kind == SequenceKind::arith) {
      if (step < 1) throw ConfigError("sequence.step", "must be >= 1");
    } else {
      for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] <= indices[i - 1]) throw ConfigError("sequence.indices", "must be strictly increasing");
    }
    if (gap_bound) {
      if (*gap_bound < 1) throw ConfigError("sequence.gap_bound", "must be >= 1");
      if (kind == SequenceKind::arith) {
        if (step > *gap_bound) throw ConfigError("sequence.gap_bound", "arith step exceeds the gap bound");
      } else {
        for (std::size_t i = 1; i < indices.size(); ++i)
          if (indices[i] - indices[i - 1] > *gap_bound)
            throw ConfigError("sequence.gap_bound", "gap at position " + std::to_string(i) + " exceeds the bound");
      }
    }
  }

  std::string label() const {
    switch (kind) {
      case SequenceKind::arith:
        return "arith(step=" + std::to_string(step) + ",start=" + std::to_string(start) + ")";
      case SequenceKind::explicit_list:
        return "explicit(n=" + std::to_string(indices.size()) + ")";
      case SequenceKind::witness:
        return "witness(n=" + std::to_string(indices.size()) + ",runs=" + std::to_string(run_ends.size()) + ")";
    }
    return "sequence";
  }
};

}  // namespace chaoskit
