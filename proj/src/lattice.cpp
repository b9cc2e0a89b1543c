#include "prepdiag/lattice.hpp"

#include "prepdiag/errors.hpp"

namespace prepdiag {

void TypeLattice::add_partition(const std::string& name) {
  if (root_of_.count(name)) throw Error("type already registered: " + name);
  partitions_.push_back(name);
  root_of_.emplace(name, name);
}

void TypeLattice::add_subtype(const std::string& child,
                              const std::string& parent) {
  if (root_of_.count(child)) throw Error("type already registered: " + child);
  const std::string& r = root(parent);
  edges_.emplace_back(child, parent);
  root_of_.emplace(child, r);
}

bool TypeLattice::contains(const std::string& type) const {
  return root_of_.count(type) != 0;
}

const std::string& TypeLattice::root(const std::string& type) const {
  auto it = root_of_.find(type);
  if (it == root_of_.end()) throw UnknownTypeError(type);
  return it->second;
}

bool TypeLattice::compatible(const std::string& a, const std::string& b) const {
  return root(a) == root(b);
}

TypeLattice TypeLattice::builtin() {
  TypeLattice lattice;
  for (const char* p : {"physical", "temporal", "abstract_set", "information"}) {
    lattice.add_partition(p);
  }
  lattice.add_subtype("human", "physical");
  return lattice;
}

}  // namespace prepdiag
