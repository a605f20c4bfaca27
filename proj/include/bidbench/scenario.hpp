#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/random.hpp"

namespace bidbench {

inline constexpr int kMaxComponents = 16;

/// The index set of selected components. Bit m-1 is set when component m
/// (1-based) takes part in the mixture.
class CaseMask {
 public:
  constexpr CaseMask() = default;
  constexpr explicit CaseMask(std::uint32_t bits) : bits_(bits) {}

  static CaseMask from_indices(std::initializer_list<int> one_based) {
    std::uint32_t bits = 0;
    for (int m : one_based) {
      if (m < 1 || m > kMaxComponents) throw InvalidArgument("CaseMask: component index out of range");
      bits |= 1u << (m - 1);
    }
    return CaseMask(bits);
  }

  [[nodiscard]] constexpr std::uint32_t bits() const noexcept { return bits_; }
  [[nodiscard]] constexpr int count() const noexcept { return std::popcount(bits_); }
  [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
  // 1-based component index.
  [[nodiscard]] constexpr bool contains(int m) const noexcept { return (bits_ >> (m - 1)) & 1u; }
  constexpr void insert(int m) noexcept { bits_ |= 1u << (m - 1); }

  [[nodiscard]] std::vector<int> indices() const {
    std::vector<int> out;
    for (int m = 1; m <= kMaxComponents; ++m)
      if (contains(m)) out.push_back(m);
    return out;
  }

  // Letter form used by per-case tables: component 1 -> 'a', 2 -> 'b', ...
  [[nodiscard]] std::string letters() const {
    std::string s;
    for (int m : indices()) s.push_back(static_cast<char>('a' + m - 1));
    return s;
  }

  friend constexpr bool operator==(CaseMask, CaseMask) = default;

 private:
  std::uint32_t bits_ = 0;
};

// Ordering used by enumerate_cases and reports: popcount, then value.
struct CaseOrder {
  constexpr bool operator()(CaseMask a, CaseMask b) const noexcept {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.bits() < b.bits();
  }
};

/// All 2^n - 1 non-empty cases, sorted by (popcount, value).
inline std::vector<CaseMask> enumerate_cases(int n) {
  if (n < 2 || n > kMaxComponents) throw InvalidArgument("enumerate_cases: n must lie in [2, 16]");
  std::vector<CaseMask> out;
  out.reserve((std::size_t{1} << n) - 1);
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) out.emplace_back(bits);
  std::sort(out.begin(), out.end(), CaseOrder{});
  return out;
}

enum class ComponentKind {
  kImageDomain,
  kRainStreak,
  kSnow,
  kHaze,
  kRaindrop,
  kShadow,
  kReflection,
  kWatermark,
};

inline std::string_view to_string(ComponentKind k) noexcept {
  switch (k) {
    case ComponentKind::kImageDomain: return "image-domain";
    case ComponentKind::kRainStreak: return "rain-streak-mask";
    case ComponentKind::kSnow: return "snow-mask";
    case ComponentKind::kHaze: return "haze-transmission";
    case ComponentKind::kRaindrop: return "raindrop";
    case ComponentKind::kShadow: return "shadow-pair";
    case ComponentKind::kReflection: return "reflection-layer";
    case ComponentKind::kWatermark: return "watermark";
  }
  return "image-domain";
}

struct ComponentSpec {
  int index = 1;  // 1..N
  std::string name;
  ComponentKind kind = ComponentKind::kImageDomain;
  std::string asset_dir;
  double selection_prob = 0.5;
};

/// Independent per-component inclusion probabilities plus the order in which
/// selected components are applied. Empty draws are always redrawn.
class SelectionPolicy {
 public:
  SelectionPolicy(std::vector<double> probs, std::vector<int> mixing_order)
      : probs_(std::move(probs)), order_(std::move(mixing_order)) {
    const int n = static_cast<int>(probs_.size());
    if (n < 1 || n > kMaxComponents) throw InvalidArgument("SelectionPolicy: need 1..16 components");
    bool any = false;
    for (double p : probs_) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("SelectionPolicy: probability outside [0,1]");
      any = any || p > 0.0;
    }
    if (!any) throw InvalidArgument("SelectionPolicy: all probabilities are zero");
    std::vector<int> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(sorted.size()) != n || sorted[i] != i + 1) {
        throw InvalidArgument("SelectionPolicy: mixing order is not a permutation of 1..N");
      }
    }
  }

  explicit SelectionPolicy(std::vector<double> probs)
      : SelectionPolicy(probs, identity_order(static_cast<int>(probs.size()))) {}

  [[nodiscard]] int size() const noexcept { return static_cast<int>(probs_.size()); }
  [[nodiscard]] const std::vector<double>& probs() const noexcept { return probs_; }
  [[nodiscard]] const std::vector<int>& mixing_order() const noexcept { return order_; }
  [[nodiscard]] static constexpr bool resample_on_empty() noexcept { return true; }

 private:
  static std::vector<int> identity_order(int n) {
    std::vector<int> o(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) o[i] = i + 1;
    return o;
  }

  std::vector<double> probs_;
  std::vector<int> order_;
};

/// One Bernoulli draw per component in index order, repeated until non-empty.
inline CaseMask sample_case(const SelectionPolicy& policy, RandomStream& rng) {
  for (;;) {
    CaseMask mask;
    for (int m = 1; m <= policy.size(); ++m) {
      if (rng.bernoulli(policy.probs()[m - 1])) mask.insert(m);
    }
    if (!mask.empty()) return mask;
  }
}

}  // namespace bidbench
