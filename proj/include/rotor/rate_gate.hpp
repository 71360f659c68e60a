#pragma once

#include <cmath>
#include <cstdint>

namespace rotor {

/// Decides whether a process of `rate` Hz is due on tick k of a clock running
/// at `base_rate` Hz. Due on tick 0 and whenever floor(k * rate / base)
/// advances, so a run of K ticks fires floor((K - 1) * rate / base) + 1 times.
class RateGate {
 public:
  RateGate() = default;
  RateGate(double rate, double base_rate) : ratio_(rate / base_rate) {}

  bool due(std::int64_t k) const {
    if (k == 0) return true;
    return slot(k) != slot(k - 1);
  }
  double ratio() const { return ratio_; }

 private:
  std::int64_t slot(std::int64_t k) const {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(k) * ratio_ + 1e-9));
  }
  double ratio_ = 1.0;
};

}  // namespace rotor
