#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace teamdag {

enum class RmVariant { Rm, RmPlus, PredictiveRmPlus, Mwu };

std::string_view to_string(RmVariant v);
RmVariant parse_rm_variant(std::string_view text);

// Regret minimizer over a probability simplex with m actions.
//
// Calls alternate: next_strategy() then observe(utility). Strategies are
// written into caller storage so a whole decision problem can share buffers.
class LocalRm {
 public:
  LocalRm(RmVariant variant, int num_actions);

  int num_actions() const { return static_cast<int>(regret_.size()); }
  RmVariant variant() const { return variant_; }

  void next_strategy(std::span<double> out);
  void observe(std::span<const double> utility);

  std::span<const double> regrets() const { return regret_; }

 private:
  RmVariant variant_;
  std::vector<double> regret_;      // cumulative utility for MWU
  std::vector<double> prediction_;  // PRM+: last observed utility
  std::vector<double> last_;        // last emitted strategy
  double range_ = 0.0;              // MWU: largest utility spread seen
  long long t_ = 0;
};

}  // namespace teamdag
