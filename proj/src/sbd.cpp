#include "usat/sbd.hpp"

#include <map>
#include <set>

#include "usat/document.hpp"

namespace usat {

const SbdNode* SystemBreakdown::find(const std::string& id) const {
  for (const auto& n : nodes_)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<const SbdNode*> SystemBreakdown::children(const std::string& id) const {
  std::vector<const SbdNode*> out;
  for (const auto& n : nodes_)
    if (n.parent && *n.parent == id) out.push_back(&n);
  return out;
}

std::vector<const SbdNode*> SystemBreakdown::preorder() const {
  std::vector<const SbdNode*> out;
  if (nodes_.empty()) return out;
  std::vector<const SbdNode*> stack{&nodes_[root_]};
  while (!stack.empty()) {
    const SbdNode* n = stack.back();
    stack.pop_back();
    out.push_back(n);
    auto kids = children(n->id);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

SystemBreakdown build_sbd(std::vector<SbdNode> nodes) {
  using K = SbdError::Kind;
  if (nodes.empty()) throw SbdError(K::kEmpty, "system breakdown has no nodes");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!index.emplace(nodes[i].id, i).second)
      throw SbdError(K::kDuplicateId, "duplicate SBD node id " + nodes[i].id);
  }
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (!n.parent) {
      if (root)
        throw SbdError(K::kMultipleRoots, "SBD has more than one root: " +
                                              nodes[*root].id + ", " + n.id);
      root = i;
    } else if (!index.contains(*n.parent)) {
      throw SbdError(K::kDanglingParent,
                     "SBD node " + n.id + " has unknown parent " + *n.parent);
    }
  }
  // Walk each parent chain; a chain longer than the node count loops.
  for (const auto& n : nodes) {
    const SbdNode* cur = &n;
    std::size_t steps = 0;
    while (cur->parent) {
      if (++steps > nodes.size())
        throw SbdError(K::kCycleDetected, "SBD parent links form a cycle through " + n.id);
      cur = &nodes[index.at(*cur->parent)];
    }
  }
  if (!root) throw SbdError(K::kCycleDetected, "SBD has no root");
  if (nodes[*root].kind != NodeKind::kSystem)
    throw SbdError(K::kRootNotSystem, "SBD root " + nodes[*root].id + " must have kind system");

  SystemBreakdown sbd;
  sbd.nodes_ = std::move(nodes);
  sbd.root_ = *root;
  return sbd;
}

std::vector<SbdNode> flatten(const SystemBreakdown& sbd) {
  return {sbd.nodes().begin(), sbd.nodes().end()};
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out + '"';
}

}  // namespace

std::string to_dot(const SystemBreakdown& sbd) {
  std::string out = "digraph sbd {\n  node [shape=box];\n";
  for (const auto& n : sbd.nodes()) {
    out += "  " + dot_quote(n.id) + " [label=" + dot_quote(n.id + '\n' + n.name) + "];\n";
  }
  for (const auto& n : sbd.nodes()) {
    if (n.parent) out += "  " + dot_quote(*n.parent) + " -> " + dot_quote(n.id) + ";\n";
  }
  return out + "}\n";
}

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSystem: return "system";
    case NodeKind::kSubsystem: return "subsystem";
    case NodeKind::kComponent: return "component";
  }
  return "component";
}

std::vector<std::string> coverage_check(const SystemBreakdown& sbd,
                                        std::span<const UncertainParameter> params) {
  std::set<std::string> covered;
  for (const auto& p : params) {
    if (!sbd.contains(p.component_ref)) throw UnknownId(p.component_ref);
    covered.insert(p.component_ref);
  }
  std::vector<std::string> out;
  for (const SbdNode* n : sbd.preorder())
    if (sbd.is_leaf(n->id) && !covered.contains(n->id)) out.push_back(n->id);
  return out;
}

}  // namespace usat
