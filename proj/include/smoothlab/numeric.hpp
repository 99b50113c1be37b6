#ifndef SMOOTHLAB_NUMERIC_HPP_
#define SMOOTHLAB_NUMERIC_HPP_

#include <cmath>

#include <boost/math/constants/constants.hpp>

namespace smoothlab {

inline const double kEulerGamma = boost::math::constants::euler<double>();

// e^{-gamma}: total mass normalizer of the Dickman density.
inline const double kExpMinusGamma = std::exp(-kEulerGamma);

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace smoothlab

#endif  // SMOOTHLAB_NUMERIC_HPP_
