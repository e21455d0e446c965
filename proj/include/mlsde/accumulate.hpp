#pragma once

#include <cmath>

namespace mlsde {

// Neumaier-compensated summation. Falls back to plain IEEE addition as soon
// as the running sum leaves the finite range, so +-inf and NaN propagate the
// same way an uncompensated loop would.
class KahanSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::isfinite(t)) {
            if (std::abs(sum_) >= std::abs(v)) {
                comp_ += (sum_ - t) + v;
            } else {
                comp_ += (v - t) + sum_;
            }
        } else {
            comp_ = 0.0;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace mlsde
