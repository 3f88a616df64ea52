#include "lobeq/dist.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lobeq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_zero_median(double median) {
  if (median != 0.0) {
    throw std::invalid_argument("volume laws must have median 0 (got " +
                                std::to_string(median) + ")");
  }
}

}  // namespace

double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

// ---------------------------------------------------------------- JumpLaw

JumpLaw JumpLaw::pareto(double shape, double scale) {
  require_positive(scale, "pareto scale");
  if (!(shape > 1.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("pareto shape must exceed 1 for a finite mean");
  }
  return JumpLaw(Pareto{shape, scale});
}

JumpLaw JumpLaw::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return JumpLaw(Exponential{rate});
}

JumpLaw JumpLaw::point_mass(double value) {
  require_positive(value, "point mass value");
  return JumpLaw(PointMass{value});
}

std::string_view JumpLaw::name() const noexcept {
  return std::visit(overloaded{[](const Pareto&) { return std::string_view("pareto"); },
                               [](const Exponential&) { return std::string_view("exponential"); },
                               [](const PointMass&) { return std::string_view("point_mass"); }},
                    kind_);
}

double JumpLaw::cdf(double x) const {
  return std::visit(
      overloaded{[x](const Pareto& p) { return x <= p.scale ? 0.0 : 1.0 - std::pow(p.scale / x, p.shape); },
                 [x](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
                 [x](const PointMass& m) { return x >= m.value ? 1.0 : 0.0; }},
      kind_);
}

double JumpLaw::survival(double x) const {
  return std::visit(
      overloaded{[x](const Pareto& p) { return x <= p.scale ? 1.0 : std::pow(p.scale / x, p.shape); },
                 [x](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
                 [x](const PointMass& m) { return m.value > x ? 1.0 : 0.0; }},
      kind_);
}

double JumpLaw::tail_expectation(double x) const {
  if (x < 0.0 || std::isnan(x)) {
    throw std::domain_error("tail_expectation requires x >= 0");
  }
  return std::visit(overloaded{[x](const Pareto& p) {
                                 const double a = p.shape;
                                 if (x <= p.scale) return a * p.scale / (a - 1.0);
                                 // a s^a x^(1-a) / (a-1) = x (s/x)^a a/(a-1)
                                 return x * std::pow(p.scale / x, a) * a / (a - 1.0);
                               },
                               [x](const Exponential& e) {
                                 return std::exp(-e.rate * x) * (x + 1.0 / e.rate);
                               },
                               [x](const PointMass& m) { return m.value > x ? m.value : 0.0; }},
                    kind_);
}

double JumpLaw::emax_ratio(double x) const { return 1.0 + emax_excess(x); }

double JumpLaw::emax_excess(double x) const {
  if (!(x > 0.0)) {
    throw std::domain_error("emax_ratio requires x > 0");
  }
  return std::visit(overloaded{[x](const Pareto& p) {
                                 const double a = p.shape;
                                 if (x <= p.scale) return a * p.scale / ((a - 1.0) * x) - 1.0;
                                 return std::pow(p.scale / x, a) / (a - 1.0);
                               },
                               [x](const Exponential& e) { return std::exp(-e.rate * x) / (e.rate * x); },
                               [x](const PointMass& m) { return m.value > x ? m.value / x - 1.0 : 0.0; }},
                    kind_);
}

double JumpLaw::mean() const { return tail_expectation(0.0); }

double JumpLaw::support_min() const {
  return std::visit(overloaded{[](const Pareto& p) { return p.scale; },
                               [](const Exponential&) { return 0.0; },
                               [](const PointMass& m) { return m.value; }},
                    kind_);
}

double JumpLaw::sample(Rng& rng) const {
  return std::visit(overloaded{[&rng](const Pareto& p) {
                                 return p.scale * std::pow(uniform_open01(rng), -1.0 / p.shape);
                               },
                               [&rng](const Exponential& e) { return -std::log(uniform_open01(rng)) / e.rate; },
                               [](const PointMass& m) { return m.value; }},
                    kind_);
}

// -------------------------------------------------------------- VolumeLaw

VolumeLaw VolumeLaw::normal(double sigma, double median) {
  require_positive(sigma, "normal sigma");
  require_zero_median(median);
  return VolumeLaw(NormalZeroMedian{sigma});
}

VolumeLaw VolumeLaw::laplace(double b, double median) {
  require_positive(b, "laplace scale");
  require_zero_median(median);
  return VolumeLaw(LaplaceZeroMedian{b});
}

std::string_view VolumeLaw::name() const noexcept {
  return std::visit(overloaded{[](const NormalZeroMedian&) { return std::string_view("normal"); },
                               [](const LaplaceZeroMedian&) { return std::string_view("laplace"); }},
                    kind_);
}

double VolumeLaw::cdf(double x) const {
  return std::visit(overloaded{[x](const NormalZeroMedian& n) {
                                 return 0.5 * std::erfc(-x / (n.sigma * std::numbers::sqrt2));
                               },
                               [x](const LaplaceZeroMedian& l) {
                                 return x < 0.0 ? 0.5 * std::exp(x / l.b) : 1.0 - 0.5 * std::exp(-x / l.b);
                               }},
                    kind_);
}

double VolumeLaw::survival(double x) const {
  return std::visit(overloaded{[x](const NormalZeroMedian& n) {
                                 return 0.5 * std::erfc(x / (n.sigma * std::numbers::sqrt2));
                               },
                               [x](const LaplaceZeroMedian& l) {
                                 return x < 0.0 ? 1.0 - 0.5 * std::exp(x / l.b) : 0.5 * std::exp(-x / l.b);
                               }},
                    kind_);
}

double VolumeLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("volume quantile requires 0 < p < 1");
  }
  return std::visit(overloaded{[p](const NormalZeroMedian& n) {
                                 if (p == 0.5) return 0.0;
                                 // 1 - p is exact for p >= 1/2, which keeps the upper tail accurate.
                                 if (p > 0.5) return n.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
                                 return -n.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
                               },
                               [p](const LaplaceZeroMedian& l) {
                                 if (p < 0.5) return l.b * std::log(2.0 * p);
                                 return -l.b * std::log(2.0 * (1.0 - p));
                               }},
                    kind_);
}

double VolumeLaw::upper_quantile(double tail) const {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw std::domain_error("volume upper quantile requires 0 < tail < 1");
  }
  if (tail >= 0.5) return quantile(1.0 - tail);  // 1 - tail is exact here
  return std::visit(overloaded{[tail](const NormalZeroMedian& n) {
                                 return n.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * tail);
                               },
                               [tail](const LaplaceZeroMedian& l) { return -l.b * std::log(2.0 * tail); }},
                    kind_);
}

double VolumeLaw::sample(Rng& rng) const { return quantile(uniform_open01(rng)); }

}  // namespace lobeq
