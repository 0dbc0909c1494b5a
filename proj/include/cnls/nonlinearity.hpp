#pragma once

// Nonlinearity catalog and numerical certification of the growth hypotheses
// (behaviour at 0, subcritical growth, the T1 well condition) and of the
// Ambrosetti-Rabinowitz superquadraticity condition.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnls/error.hpp"

namespace cnls {

struct PowerTerm {
  double coefficient;
  double exponent;
};

class Nonlinearity {
 public:
  enum class Family { power_sum, log_enhanced };

  /// f(t) = sum a_i |t|^{p_i} sign(t). An empty term list is the zero nonlinearity.
  static Nonlinearity power_sum(std::vector<PowerTerm> terms) {
    for (const auto& term : terms) {
      if (!(term.exponent > 1.0 && term.exponent < 5.0)) {
        throw Error(ErrorCode::InvalidExponent,
                    "exponent " + std::to_string(term.exponent) + " outside (1,5)");
      }
      if (!(term.coefficient > 0.0) || !std::isfinite(term.coefficient)) {
        throw Error(ErrorCode::InvalidNonlinearity, "power_sum coefficients must be positive");
      }
    }
    Nonlinearity nl;
    nl.family_ = Family::power_sum;
    nl.terms_ = std::move(terms);
    return nl;
  }

  /// F(t) = a t^2 ln(1+t^2) / 2. Satisfies the growth hypotheses but not AR.
  static Nonlinearity log_enhanced(double amplitude) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
      throw Error(ErrorCode::InvalidNonlinearity, "log_enhanced amplitude must be positive");
    }
    Nonlinearity nl;
    nl.family_ = Family::log_enhanced;
    nl.amplitude_ = amplitude;
    return nl;
  }

  static Nonlinearity cubic() { return power_sum({{1.0, 3.0}}); }
  static Nonlinearity zero() { return power_sum({}); }

  Family family() const { return family_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  double amplitude() const { return amplitude_; }

  double f(double t) const {
    const double s = t < 0.0 ? -1.0 : 1.0;
    const double a = std::fabs(t);
    if (family_ == Family::log_enhanced) {
      // t^3/(1+t^2) written as t - t/(1+t^2) to stay finite for large t.
      return s * amplitude_ * (a * std::log1p(a * a) + a - a / (1.0 + a * a));
    }
    double sum = 0.0;
    for (const auto& term : terms_) sum += term.coefficient * ipow(a, term.exponent);
    return s * sum;
  }

  double F(double t) const {
    const double a = std::fabs(t);
    if (family_ == Family::log_enhanced) return 0.5 * amplitude_ * a * a * std::log1p(a * a);
    double sum = 0.0;
    for (const auto& term : terms_) {
      sum += term.coefficient * ipow(a, term.exponent + 1.0) / (term.exponent + 1.0);
    }
    return sum;
  }

  /// f'(t); even in t.
  double df(double t) const {
    const double a = std::fabs(t);
    if (family_ == Family::log_enhanced) {
      const double q = 1.0 + a * a;
      return amplitude_ * (std::log1p(a * a) + 2.0 * a * a / q + a * a * (3.0 + a * a) / (q * q));
    }
    double sum = 0.0;
    for (const auto& term : terms_) {
      sum += term.coefficient * term.exponent * ipow(a, term.exponent - 1.0);
    }
    return sum;
  }

  std::string describe() const {
    if (family_ == Family::log_enhanced) {
      return "log_enhanced(a=" + std::to_string(amplitude_) + ")";
    }
    std::string out = "power_sum[";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += ",";
      out += "(" + std::to_string(terms_[i].coefficient) + "," + std::to_string(terms_[i].exponent) + ")";
    }
    return out + "]";
  }

 private:
  Nonlinearity() = default;

  static double ipow(double a, double p) {
    if (p == 3.0) return a * a * a;
    if (p == 4.0) return (a * a) * (a * a);
    if (p == 2.0) return a * a;
    return std::pow(a, p);
  }

  Family family_ = Family::power_sum;
  std::vector<PowerTerm> terms_;
  double amplitude_ = 0.0;
};

inline double eval_f(const Nonlinearity& nl, double t) { return nl.f(t); }
inline double eval_F(const Nonlinearity& nl, double t) { return nl.F(t); }

// ---------------------------------------------------------------------------
// Assumption checks

/// Required excess of inf f(t)t/F(t) over 2 before AR is considered certified.
inline constexpr double kArMargin = 0.05;

struct SampleSpec {
  double t_max = 10.0;
  int n_samples = 1000;
};

struct GrowthConstant {
  double epsilon;
  double c_subcritical;  ///< C_eps for |f| <= eps|t| + C|t|^p and |F| <= eps t^2 + C|t|^{p+1}
  double c_critical;     ///< C_eps for the same bounds with exponents 5 and 6
};

struct AssumptionReport {
  bool f1_ok = false;
  bool f2_ok = false;
  double p_used = 0.0;  ///< exponent for which f(t)/|t|^p -> 0 was observed
  bool f3_ok = false;
  double T1 = 0.0;      ///< witness with F(T1) > T1^2/2 when f3_ok
  bool ar_ok = false;
  double mu = 0.0;           ///< sampled inf f(t)t/F(t); a valid AR constant when ar_ok
  double violation_mu = 0.0; ///< when !ar_ok: mu with mu F(t) > f(t) t at violation_t
  double violation_t = 0.0;
  std::vector<GrowthConstant> growth_constants;
};

namespace detail {

// Ratio sequence along a geometric ramp is read as "tends to zero" when it is
// nonincreasing (up to rounding) and has at least halved, or is negligible.
inline bool ramp_decays(const std::vector<double>& q) {
  if (q.empty()) return false;
  if (q.back() < 1e-8) return true;
  for (std::size_t k = 1; k < q.size(); ++k) {
    if (q[k] > q[k - 1] * (1.0 + 1e-12)) return false;
  }
  return q.back() < 0.5 * q.front();
}

inline std::vector<double> geometric_samples(const SampleSpec& spec) {
  const double lo = std::min(1e-3, spec.t_max * 1e-3);
  std::vector<double> t(static_cast<std::size_t>(spec.n_samples));
  const double ratio = std::log(spec.t_max / lo) / (spec.n_samples - 1);
  for (int i = 0; i < spec.n_samples; ++i) t[i] = lo * std::exp(ratio * i);
  t.back() = spec.t_max;
  return t;
}

}  // namespace detail

inline AssumptionReport check_assumptions(const Nonlinearity& nl, double p_test,
                                          const SampleSpec& spec = {}) {
  if (!(p_test > 1.0 && p_test < 5.0)) {
    throw Error(ErrorCode::InvalidExponent, "p_test " + std::to_string(p_test) + " outside (1,5)");
  }
  if (!(spec.t_max > 0.0) || spec.n_samples < 100) {
    throw Error(ErrorCode::InvalidArgument, "sample spec needs t_max > 0 and n_samples >= 100");
  }
  AssumptionReport rep;

  // (f1): f(t)/t along t = 1e-1 ... 1e-12.
  {
    std::vector<double> q;
    for (int k = 1; k <= 12; ++k) {
      const double t = std::pow(10.0, -k);
      q.push_back(std::fabs(nl.f(t) / t));
    }
    rep.f1_ok = detail::ramp_decays(q);
  }

  // (f2): f(t)/t^p along t = 1e1 ... 1e12, trying p_test first and then
  // exponents between p_test and 5.
  for (int j = 0; j < 4 && !rep.f2_ok; ++j) {
    const double p = p_test + (5.0 - p_test) * j / 4.0;
    std::vector<double> q;
    for (int k = 1; k <= 12; ++k) {
      const double t = std::pow(10.0, k);
      q.push_back(std::fabs(nl.f(t)) / std::pow(t, p));
    }
    if (detail::ramp_decays(q)) {
      rep.f2_ok = true;
      rep.p_used = p;
    }
  }

  const auto samples = detail::geometric_samples(spec);

  for (double t : samples) {
    if (nl.F(t) > 0.5 * t * t) {
      rep.f3_ok = true;
      rep.T1 = t;
      break;
    }
  }

  double inf_ratio = std::numeric_limits<double>::infinity();
  double arg_inf = samples.front();
  bool positive = true;
  for (double t : samples) {
    const double F = nl.F(t);
    if (!(F > 0.0)) {
      positive = false;
      arg_inf = t;
      break;
    }
    const double ratio = nl.f(t) * t / F;
    if (ratio < inf_ratio) {
      inf_ratio = ratio;
      arg_inf = t;
    }
  }
  if (positive && inf_ratio >= 2.0 + kArMargin) {
    rep.ar_ok = true;
    rep.mu = inf_ratio;
  } else {
    rep.mu = positive ? inf_ratio : 0.0;
    rep.violation_mu = 2.0 + kArMargin;
    rep.violation_t = arg_inf;
  }

  for (double eps : {1.0, 1e-1, 1e-2, 1e-3}) {
    GrowthConstant gc{eps, 0.0, 0.0};
    for (double t : samples) {
      const double af = std::fabs(nl.f(t));
      const double aF = std::fabs(nl.F(t));
      gc.c_subcritical = std::max({gc.c_subcritical, (af - eps * t) / std::pow(t, p_test),
                                   (aF - eps * t * t) / std::pow(t, p_test + 1.0)});
      gc.c_critical = std::max({gc.c_critical, (af - eps * t) / std::pow(t, 5.0),
                                (aF - eps * t * t) / std::pow(t, 6.0)});
    }
    rep.growth_constants.push_back(gc);
  }
  return rep;
}

}  // namespace cnls
