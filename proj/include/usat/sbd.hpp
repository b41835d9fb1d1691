#ifndef USAT_SBD_HPP_
#define USAT_SBD_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usat/error.hpp"

namespace usat {

enum class NodeKind { kSystem, kSubsystem, kComponent };

struct SbdNode {
  std::string id;
  std::string name;
  std::string description;
  std::optional<std::string> parent;
  NodeKind kind = NodeKind::kComponent;

  friend bool operator==(const SbdNode&, const SbdNode&) = default;
};

class SbdError : public Error {
 public:
  enum class Kind {
    kEmpty,
    kCycleDetected,
    kMultipleRoots,
    kDuplicateId,
    kDanglingParent,
    kRootNotSystem,
  };
  SbdError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// System breakdown tree. Only build_sbd constructs one, so every instance
// satisfies the tree invariants: one root of kind system, unique ids, no
// cycles. Node order is the order given to build_sbd. A default-constructed
// breakdown is empty and has no root.
class SystemBreakdown {
 public:
  std::span<const SbdNode> nodes() const { return nodes_; }
  const SbdNode& root() const { return nodes_[root_]; }
  const SbdNode* find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }
  // Children of id in input order.
  std::vector<const SbdNode*> children(const std::string& id) const;
  // Depth-first pre-order, children in input order.
  std::vector<const SbdNode*> preorder() const;
  bool is_leaf(const std::string& id) const { return children(id).empty(); }

  friend bool operator==(const SystemBreakdown&, const SystemBreakdown&) = default;

 private:
  friend SystemBreakdown build_sbd(std::vector<SbdNode> nodes);
  std::vector<SbdNode> nodes_;
  std::size_t root_ = 0;
};

// Throws SbdError.
SystemBreakdown build_sbd(std::vector<SbdNode> nodes);

// Inverse of build_sbd: the node list in its original order.
std::vector<SbdNode> flatten(const SystemBreakdown& sbd);

// Graphviz DOT text: nodes labeled "<id>\n<name>" in input order, one
// parent -> child edge per non-root node in input order.
std::string to_dot(const SystemBreakdown& sbd);

std::string to_string(NodeKind kind);

}  // namespace usat

#endif  // USAT_SBD_HPP_
