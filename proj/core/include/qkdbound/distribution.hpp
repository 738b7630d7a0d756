#pragma once

#include <vector>

#include "qkdbound/errors.hpp"

namespace qkdbound {

// Nonnegative probability table over two or three parties, stored flat in
// row-major order (last axis fastest).
class JointDistribution {
public:
    JointDistribution(std::vector<int> shape, std::vector<double> probs);

    int parties() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    const std::vector<double>& probs() const { return probs_; }

    double at(int a, int b) const;
    double at(int a, int b, int c) const;

    // Sum over all axes except the given one.
    std::vector<double> marginal(int axis) const;

    // Two-party marginal of a three-party table (sums out the last axis).
    JointDistribution marginal_ab() const;

private:
    std::vector<int> shape_;
    std::vector<double> probs_;
};

}  // namespace qkdbound
