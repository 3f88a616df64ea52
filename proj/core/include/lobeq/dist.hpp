#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>

namespace lobeq {

/// Random engine used throughout the library. Callers own it; nothing in
/// lobeq keeps a hidden global generator.
using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1), built from the top 53 bits of
/// the engine so results are identical across standard libraries.
double uniform_open01(Rng& rng);

struct Pareto {
  double shape;
  double scale;
};

struct Exponential {
  double rate;
};

struct PointMass {
  double value;
};

/// Law of the (positive) efficient-price jump magnitude.
///
/// Every law exposes closed forms for the quantities the equilibrium
/// formulas need: the CDF, the survival function, the tail expectation
/// E[B 1{B > x}] and E[max(B/x, 1)].
class JumpLaw {
 public:
  using Kind = std::variant<Pareto, Exponential, PointMass>;

  /// Pareto with shape > 1 (finite mean) and positive scale.
  static JumpLaw pareto(double shape, double scale);
  static JumpLaw exponential(double rate);
  static JumpLaw point_mass(double value);

  const Kind& kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  /// P(B <= x).
  double cdf(double x) const;
  /// P(B > x).
  double survival(double x) const;
  /// E[B 1{B > x}] for x >= 0.
  double tail_expectation(double x) const;
  /// E[max(B/x, 1)] = E[B 1{B > x}]/x + P(B <= x), for x > 0.
  double emax_ratio(double x) const;
  /// E[(B/x - 1)^+] = emax_ratio(x) - 1 without the cancellation.
  double emax_excess(double x) const;

  double mean() const;
  /// Infimum of the support; 0 for the exponential law.
  double support_min() const;

  double sample(Rng& rng) const;

 private:
  explicit JumpLaw(Kind kind) : kind_(kind) {}
  Kind kind_;
};

struct NormalZeroMedian {
  double sigma;
};

struct LaplaceZeroMedian {
  double b;
};

/// Law of the signed noise-trader volume Q^u. Median is always zero.
class VolumeLaw {
 public:
  using Kind = std::variant<NormalZeroMedian, LaplaceZeroMedian>;

  /// `median` exists only so callers forwarding a location parameter get a
  /// hard error instead of a silently shifted law.
  static VolumeLaw normal(double sigma, double median = 0.0);
  static VolumeLaw laplace(double b, double median = 0.0);

  const Kind& kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  double cdf(double x) const;
  /// P(Q > x), evaluated without cancellation in the upper tail.
  double survival(double x) const;
  /// Inverse CDF on (0, 1); throws std::domain_error outside.
  double quantile(double p) const;
  /// Inverse survival: x with P(Q > x) = tail, accurate for tiny tails.
  double upper_quantile(double tail) const;
  double sample(Rng& rng) const;

 private:
  explicit VolumeLaw(Kind kind) : kind_(kind) {}
  Kind kind_;
};

}  // namespace lobeq
