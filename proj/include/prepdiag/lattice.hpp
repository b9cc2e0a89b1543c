#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace prepdiag {

/// Semi-partitioned type lattice: a forest of subtype edges whose roots are
/// the partitions. Two types are compatible iff they share a root.
class TypeLattice {
 public:
  /// Registers a partition root. Throws Error if the name is already taken.
  void add_partition(const std::string& name);
  /// Registers `child` under `parent`. The parent must already be
  /// registered and the child must be new, which keeps the forest acyclic.
  void add_subtype(const std::string& child, const std::string& parent);

  bool contains(const std::string& type) const;
  /// Partition root of `type`; throws UnknownTypeError.
  const std::string& root(const std::string& type) const;
  bool compatible(const std::string& a, const std::string& b) const;

  const std::vector<std::string>& partitions() const noexcept {
    return partitions_;
  }
  /// (child, parent) edges in registration order.
  const std::vector<std::pair<std::string, std::string>>& subtypes()
      const noexcept {
    return edges_;
  }

  /// physical, temporal, abstract_set, information; human < physical.
  static TypeLattice builtin();

 private:
  std::vector<std::string> partitions_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::string> root_of_;
};

}  // namespace prepdiag
