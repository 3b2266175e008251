#include "teamdag/regret.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "teamdag/game.hpp"

namespace teamdag {

std::string_view to_string(RmVariant v) {
  switch (v) {
    case RmVariant::Rm: return "rm";
    case RmVariant::RmPlus: return "rm+";
    case RmVariant::PredictiveRmPlus: return "prm+";
    case RmVariant::Mwu: return "mwu";
  }
  return "?";
}

RmVariant parse_rm_variant(std::string_view text) {
  if (text == "rm") return RmVariant::Rm;
  if (text == "rm+") return RmVariant::RmPlus;
  if (text == "prm+") return RmVariant::PredictiveRmPlus;
  if (text == "mwu") return RmVariant::Mwu;
  throw GameError("unknown regret minimizer '" + std::string(text) + "'");
}

LocalRm::LocalRm(RmVariant variant, int num_actions)
    : variant_(variant),
      regret_(static_cast<std::size_t>(num_actions), 0.0),
      prediction_(variant == RmVariant::PredictiveRmPlus ? static_cast<std::size_t>(num_actions) : 0, 0.0),
      last_(static_cast<std::size_t>(num_actions), 1.0 / num_actions) {}

namespace {

// Normalizes the positive part of v into out; uniform when nothing is positive.
void positive_part(std::span<const double> v, std::span<double> out) {
  double total = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    out[a] = v[a] > 0.0 ? v[a] : 0.0;
    total += out[a];
  }
  if (total > 0.0) {
    for (double& x : out) x /= total;
  } else {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
  }
}

}  // namespace

void LocalRm::next_strategy(std::span<double> out) {
  const std::size_t m = regret_.size();
  switch (variant_) {
    case RmVariant::Rm:
    case RmVariant::RmPlus:
      positive_part(regret_, out);
      break;
    case RmVariant::PredictiveRmPlus: {
      double expected = 0.0;
      for (std::size_t a = 0; a < m; ++a) expected += prediction_[a] * last_[a];
      for (std::size_t a = 0; a < m; ++a) out[a] = regret_[a] + prediction_[a] - expected;
      positive_part(std::span<const double>(out.data(), m), out);
      break;
    }
    case RmVariant::Mwu: {
      const double t = static_cast<double>(t_ + 1);
      const double scale = range_ > 0.0 ? range_ : 1.0;
      const double eta = m > 1 ? std::sqrt(2.0 * std::log(static_cast<double>(m)) / t) / scale : 0.0;
      const double top = *std::max_element(regret_.begin(), regret_.end());
      double total = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        out[a] = std::exp(eta * (regret_[a] - top));
        total += out[a];
      }
      for (double& x : out) x /= total;
      break;
    }
  }
  std::copy(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(m), last_.begin());
}

void LocalRm::observe(std::span<const double> utility) {
  const std::size_t m = regret_.size();
  ++t_;
  if (variant_ == RmVariant::Mwu) {
    const auto [lo, hi] = std::minmax_element(utility.begin(), utility.begin() + static_cast<std::ptrdiff_t>(m));
    range_ = std::max(range_, *hi - *lo);
    for (std::size_t a = 0; a < m; ++a) regret_[a] += utility[a];
    return;
  }
  double expected = 0.0;
  for (std::size_t a = 0; a < m; ++a) expected += utility[a] * last_[a];
  for (std::size_t a = 0; a < m; ++a) {
    regret_[a] += utility[a] - expected;
    if (variant_ != RmVariant::Rm && regret_[a] < 0.0) regret_[a] = 0.0;
  }
  if (variant_ == RmVariant::PredictiveRmPlus)
    std::copy(utility.begin(), utility.begin() + static_cast<std::ptrdiff_t>(m), prediction_.begin());
}

}  // namespace teamdag
