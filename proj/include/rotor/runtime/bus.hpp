#pragma once

#include "rotor/runtime/messages.hpp"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <typeindex>
#include <vector>

namespace rotor::rt {

class BusError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Flattened rows queued for a logger.
struct RowSink {
  std::deque<std::vector<double>> rows;
};

class TopicBase {
 public:
  TopicBase(std::string name, std::type_index type, const char* schema, bool logged)
      : name_(std::move(name)), type_(type), schema_(schema), logged_(logged) {}
  virtual ~TopicBase() = default;

  const std::string& name() const { return name_; }
  std::type_index type() const { return type_; }
  /// Empty for topics that are never logged.
  const std::string& schema() const { return schema_; }
  bool logged() const { return logged_; }
  void set_unlogged() { logged_ = false; }
  virtual const std::vector<Column>& columns() const = 0;

  /// Attaches a row sink; every later publish appends one flattened row.
  std::shared_ptr<RowSink> attach_sink();

 protected:
  std::vector<std::shared_ptr<RowSink>> sinks_;

 private:
  std::string name_;
  std::type_index type_;
  std::string schema_;
  bool logged_;
};

template <class T>
class Subscription {
 public:
  explicit Subscription(std::shared_ptr<std::deque<T>> inbox) : inbox_(std::move(inbox)) {}
  Subscription() = default;

  /// All messages received since the previous drain, in publish order.
  std::vector<T> drain() {
    std::vector<T> out;
    if (!inbox_) return out;
    out.assign(std::make_move_iterator(inbox_->begin()), std::make_move_iterator(inbox_->end()));
    inbox_->clear();
    if (!out.empty()) last_ = out.back();
    return out;
  }

  /// Most recent message ever received (drains the inbox).
  const std::optional<T>& latest() {
    if (inbox_ && !inbox_->empty()) {
      last_ = std::move(inbox_->back());
      inbox_->clear();
    }
    return last_;
  }

  bool pending() const { return inbox_ && !inbox_->empty(); }

 private:
  std::shared_ptr<std::deque<T>> inbox_;
  std::optional<T> last_;
};

template <class T>
class Topic : public TopicBase {
 public:
  Topic(std::string name, bool logged)
      : TopicBase(std::move(name), typeid(T), schema_of(), logged && Loggable<T>) {}

  const std::vector<Column>& columns() const override {
    if constexpr (Loggable<T>) {
      return MessageTraits<T>::columns();
    } else {
      static const std::vector<Column> none;
      return none;
    }
  }

  void publish(const T& msg) {
    for (auto& inbox : inboxes_) inbox->push_back(msg);
    if constexpr (Loggable<T>) {
      if (!sinks_.empty()) {
        std::vector<double> row;
        MessageTraits<T>::flatten(msg, row);
        for (auto& s : sinks_) s->rows.push_back(row);
      }
    }
  }

  Subscription<T> subscribe() {
    auto inbox = std::make_shared<std::deque<T>>();
    inboxes_.push_back(inbox);
    return Subscription<T>(inbox);
  }

 private:
  static const char* schema_of() {
    if constexpr (Loggable<T>) return MessageTraits<T>::schema;
    return "";
  }

  std::vector<std::shared_ptr<std::deque<T>>> inboxes_;
};

/// Named topics with one payload type each. Delivery is synchronous: a
/// published message lands in every subscriber's inbox immediately.
class Bus {
 public:
  template <class T>
  Topic<T>& topic(const std::string& name, bool logged = true) {
    auto it = topics_.find(name);
    if (it == topics_.end()) {
      auto t = std::make_unique<Topic<T>>(name, logged);
      auto& ref = *t;
      order_.push_back(t.get());
      topics_.emplace(name, std::move(t));
      return ref;
    }
    if (it->second->type() != typeid(T)) {
      throw BusError("topic '" + name + "' already carries a different message type");
    }
    if (!logged) it->second->set_unlogged();
    return static_cast<Topic<T>&>(*it->second);
  }

  template <class T>
  Subscription<T> subscribe(const std::string& name) {
    return topic<T>(name).subscribe();
  }

  bool has(const std::string& name) const { return topics_.count(name) != 0; }
  /// Topics in creation order.
  const std::vector<TopicBase*>& topics() const { return order_; }

 private:
  std::map<std::string, std::unique_ptr<TopicBase>> topics_;
  std::vector<TopicBase*> order_;
};

}  // namespace rotor::rt
