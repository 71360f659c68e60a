#include "rotor/runtime/registry.hpp"

#include <cmath>

namespace rotor::rt {

bool is_role(const std::string& role) {
  for (const char* r : kRoleOrder)
    if (role == r) return true;
  return false;
}

bool Node::set_param(const std::string&, double) { return false; }

void Registry::provide(const std::string& role, const std::string& impl, Factory factory) {
  if (!is_role(role)) throw RegistryError("unknown role '" + role + "'");
  factories_[role][impl] = std::move(factory);
}

Node& Registry::bind(const NodeDescriptor& d) {
  if (!is_role(d.role)) throw RegistryError("unknown role '" + d.role + "'");
  if (bound_.count(d.role)) throw RegistryError("role '" + d.role + "' is already bound");
  const auto roles = factories_.find(d.role);
  if (roles == factories_.end() || !roles->second.count(d.impl)) {
    throw RegistryError("unknown implementation '" + d.impl + "' for role '" + d.role + "'");
  }
  if (!(d.rate > 0.0) || !std::isfinite(d.rate)) {
    throw RegistryError("role '" + d.role + "' needs a positive tick rate");
  }
  std::unique_ptr<Node> node = roles->second.at(d.impl)(bus_, d);
  for (const auto& [key, value] : d.params) {
    if (!node->set_param(key, value)) {
      throw RegistryError("implementation '" + d.impl + "' has no parameter '" + key + "'");
    }
  }
  Node& ref = *node;
  bound_.emplace(d.role, Bound{d, std::move(node)});
  return ref;
}

Node* Registry::find(const std::string& role) const {
  const auto it = bound_.find(role);
  return it == bound_.end() ? nullptr : it->second.node.get();
}

const NodeDescriptor* Registry::descriptor(const std::string& role) const {
  const auto it = bound_.find(role);
  return it == bound_.end() ? nullptr : &it->second.descriptor;
}

std::vector<std::string> Registry::implementations(const std::string& role) const {
  std::vector<std::string> out;
  const auto it = factories_.find(role);
  if (it != factories_.end())
    for (const auto& [name, f] : it->second) out.push_back(name);
  return out;
}

}  // namespace rotor::rt
