#pragma once

#include "rotor/runtime/node.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace rotor::rt {

class RegistryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Maps role keys to named implementations and holds the bound instance of
/// each role.
class Registry {
 public:
  using Factory = std::function<std::unique_ptr<Node>(Bus&, const NodeDescriptor&)>;

  explicit Registry(Bus& bus) : bus_(bus) {}

  void provide(const std::string& role, const std::string& impl, Factory factory);

  /// Constructs and binds an implementation, then applies its parameter map.
  /// Throws RegistryError on an unknown role or implementation, a duplicate
  /// binding, a non-positive rate or an unknown parameter.
  Node& bind(const NodeDescriptor& d);

  Node* find(const std::string& role) const;
  const NodeDescriptor* descriptor(const std::string& role) const;
  std::vector<std::string> implementations(const std::string& role) const;
  Bus& bus() { return bus_; }

 private:
  struct Bound {
    NodeDescriptor descriptor;
    std::unique_ptr<Node> node;
  };

  Bus& bus_;
  std::map<std::string, std::map<std::string, Factory>> factories_;
  std::map<std::string, Bound> bound_;
};

}  // namespace rotor::rt
