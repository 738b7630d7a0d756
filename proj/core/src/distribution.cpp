#include "qkdbound/distribution.hpp"

#include <cmath>
#include <cstddef>

namespace qkdbound {

namespace {
constexpr double kSumTol = 1e-10;
constexpr double kNegTol = 1e-12;
}  // namespace

JointDistribution::JointDistribution(std::vector<int> shape, std::vector<double> probs)
    : shape_(std::move(shape)), probs_(std::move(probs)) {
    if (shape_.size() != 2 && shape_.size() != 3)
        throw InvalidArgument("JointDistribution: only 2 or 3 parties supported");
    std::size_t cells = 1;
    for (int n : shape_) {
        if (n < 1) throw InvalidArgument("JointDistribution: alphabet sizes must be positive");
        cells *= static_cast<std::size_t>(n);
    }
    if (probs_.size() != cells)
        throw InvalidArgument("JointDistribution: table size does not match shape");
    double total = 0.0;
    for (double& p : probs_) {
        if (p < -kNegTol) throw InvalidArgument("JointDistribution: negative probability");
        if (p < 0.0) p = 0.0;
        total += p;
    }
    if (std::abs(total - 1.0) > kSumTol)
        throw InvalidArgument("JointDistribution: probabilities do not sum to 1");
}

double JointDistribution::at(int a, int b) const {
    return probs_[static_cast<std::size_t>(a) * shape_[1] + b];
}

double JointDistribution::at(int a, int b, int c) const {
    return probs_[(static_cast<std::size_t>(a) * shape_[1] + b) * shape_[2] + c];
}

std::vector<double> JointDistribution::marginal(int axis) const {
    if (axis < 0 || axis >= parties())
        throw InvalidArgument("JointDistribution::marginal: axis out of range");
    std::vector<double> out(shape_[axis], 0.0);
    std::size_t idx = 0;
    if (parties() == 2) {
        for (int a = 0; a < shape_[0]; ++a)
            for (int b = 0; b < shape_[1]; ++b, ++idx)
                out[axis == 0 ? a : b] += probs_[idx];
    } else {
        for (int a = 0; a < shape_[0]; ++a)
            for (int b = 0; b < shape_[1]; ++b)
                for (int c = 0; c < shape_[2]; ++c, ++idx)
                    out[axis == 0 ? a : (axis == 1 ? b : c)] += probs_[idx];
    }
    return out;
}

JointDistribution JointDistribution::marginal_ab() const {
    if (parties() != 3)
        throw InvalidArgument("JointDistribution::marginal_ab: needs a 3-party table");
    std::vector<double> out(static_cast<std::size_t>(shape_[0]) * shape_[1], 0.0);
    for (int a = 0; a < shape_[0]; ++a)
        for (int b = 0; b < shape_[1]; ++b)
            for (int c = 0; c < shape_[2]; ++c)
                out[static_cast<std::size_t>(a) * shape_[1] + b] += at(a, b, c);
    return JointDistribution({shape_[0], shape_[1]}, std::move(out));
}

}  // namespace qkdbound
