#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "rmlab/errors.hpp"

namespace rmlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// The exponent triple (p, q, alpha) of RM_{p,q,alpha}. p and q may be +inf.
class ParamSpace {
 public:
  ParamSpace(double p, double q, double alpha) : p_(p), q_(q), alpha_(alpha) {
    if (!(p >= 1.0) || !(q >= 1.0)) {
      throw RegimeError("p and q must lie in [1, inf], got p=" + fmt(p) + " q=" + fmt(q));
    }
    if (!std::isfinite(alpha)) throw RegimeError("alpha must be finite");
  }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double alpha() const noexcept { return alpha_; }
  bool p_infinite() const noexcept { return std::isinf(p_); }
  bool q_infinite() const noexcept { return std::isinf(q_); }
  double inv_p() const noexcept { return p_infinite() ? 0.0 : 1.0 / p_; }
  double inv_q() const noexcept { return q_infinite() ? 0.0 : 1.0 / q_; }

  /// 1/p - 1/q, the alpha at which RM collapses to L^q.
  double critical_alpha() const noexcept { return inv_p() - inv_q(); }

  /// 1 - p*alpha - p/q, the power of |Q| in each family term. Requires p < inf.
  double cube_exponent() const {
    require_finite_p("cube_exponent");
    return 1.0 - p_ * alpha_ - p_ * inv_q();
  }

  /// p / (1 - p*alpha); for p = inf the limit -1/alpha (alpha < 0).
  std::optional<double> theta() const {
    if (p_infinite()) {
      if (alpha_ < 0.0) return -1.0 / alpha_;
      return std::nullopt;
    }
    double denom = 1.0 - p_ * alpha_;
    if (denom == 0.0) return std::nullopt;
    return p_ / denom;
  }

  /// p in (1,inf), q in [1,p), alpha in (1/p - 1/q, 0).
  bool in_main_regime() const noexcept {
    return !p_infinite() && p_ > 1.0 && q_ < p_ && alpha_ > critical_alpha() && alpha_ < 0.0;
  }

  /// p in [1,inf), q in [1,p], alpha in (-1/q, 1/p - 1/q]: the RM norm is a
  /// multiple of the L^q norm.
  bool in_identity_regime() const noexcept {
    return !p_infinite() && q_ <= p_ && alpha_ > -inv_q() && alpha_ <= critical_alpha();
  }

  /// p in [1,inf), q in (p,inf], alpha in (0, 1/p - 1/q): RM is the zero space.
  bool in_zero_regime() const noexcept {
    return !p_infinite() && q_ > p_ && alpha_ > 0.0 && alpha_ < critical_alpha();
  }

  void require_main_regime(const char* op) const {
    if (!in_main_regime()) {
      throw RegimeError(std::string(op) + ": requires p in (1,inf), q in [1,p), alpha in (1/p-1/q,0); got " +
                        describe());
    }
  }

  void require_finite_p(const char* op) const {
    if (p_infinite()) throw RegimeError(std::string(op) + ": requires finite p");
  }

  std::string describe() const {
    return "p=" + fmt(p_) + " q=" + fmt(q_) + " alpha=" + fmt(alpha_);
  }

 private:
  static std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }

  double p_;
  double q_;
  double alpha_;
};

}  // namespace rmlab
