#pragma once

#include <optional>

namespace nlab {

/// Lebesgue exponent 1 <= p < infinity.
class Exponent {
 public:
  explicit Exponent(double p);

  double value() const { return p_; }
  /// p / (p - 1); empty for p = 1, whose dual exponent is infinite.
  std::optional<double> dual() const;
  bool is_one() const { return p_ == 1.0; }
  bool is_two() const { return p_ == 2.0; }

 private:
  double p_;
};

}  // namespace nlab
