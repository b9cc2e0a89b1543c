#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "prepdiag/term.hpp"

namespace prepdiag {

/// Where a Skolem witness came from: the rule, the existential variable and
/// the rule's universal bindings when it was minted.
struct WitnessOrigin {
  std::string rule;
  std::string var;
  std::vector<Term> universals;
  std::size_t depth = 0;
};

/// Session-scoped source of entity ids (#1, #2, ...). Also remembers the
/// origin of every witness it minted, so that saturating a fact set that
/// already contains witnesses reuses them instead of minting again.
class EntityCounter {
 public:
  explicit EntityCounter(std::uint64_t first = 1) : next_(first) {}

  Term fresh();
  std::uint64_t peek() const noexcept { return next_.load(); }

  void record_witness(const std::string& id, WitnessOrigin origin);
  std::optional<WitnessOrigin> witness(const std::string& id) const;

 private:
  std::atomic<std::uint64_t> next_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, WitnessOrigin> witnesses_;
};

/// The distinguished speaker entity.
inline const std::string kUserEntity = "user";

}  // namespace prepdiag
