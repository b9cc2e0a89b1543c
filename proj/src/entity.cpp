#include "prepdiag/entity.hpp"

namespace prepdiag {

Term EntityCounter::fresh() {
  return Term::entity(std::to_string(next_.fetch_add(1)));
}

void EntityCounter::record_witness(const std::string& id, WitnessOrigin origin) {
  std::lock_guard<std::mutex> lock(mu_);
  witnesses_[id] = std::move(origin);
}

std::optional<WitnessOrigin> EntityCounter::witness(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = witnesses_.find(id);
  if (it == witnesses_.end()) return std::nullopt;
  return it->second;
}

}  // namespace prepdiag
