#pragma once

// Trusted-device detector models. Ideal POVMs are transformed into noisy
// and lossy ones (dark counts, finite efficiency with an explicit vacuum
// outcome), and observed statistics are inverted back to the ideal ones.
//
// Conventions: the vacuum outcome carries the label "vac" and, where a
// distribution column is concerned, sits at the caller-supplied index
// (the builders here always append it last). Dark counts are split across
// click outcomes only. The composition order is apply_efficiency first,
// then apply_dark_counts on the extended space, so a dark count can turn a
// would-be vacuum event into a click; the alternative order (dark counts on
// the signal space first) differs at O(d(1-eta)).

#include <optional>
#include <string>
#include <vector>

#include "qkdbound/distribution.hpp"
#include "qkdbound/quantum.hpp"

namespace qkdbound {

inline constexpr const char* kVacuumLabel = "vac";

// Positive operators summing to the identity, with outcome labels.
class Povm {
public:
    Povm(std::vector<HermitianMatrix> elements, std::vector<std::string> labels);

    Eigen::Index dim() const { return elements_.front().dim(); }
    std::size_t size() const { return elements_.size(); }
    const HermitianMatrix& element(std::size_t i) const { return elements_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<HermitianMatrix>& elements() const { return elements_; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool has_vacuum() const;
    std::size_t click_count() const;  // outcomes not labeled "vac"

private:
    std::vector<HermitianMatrix> elements_;
    std::vector<std::string> labels_;
};

// Detector imperfections: total dark count probability and per-detector
// efficiencies. Empty dark_split means an equal split d/n over the n click
// outcomes of whatever POVM is being transformed; an efficiencies list of
// size one is broadcast.
struct DetectorSpec {
    double dark_total = 0.0;
    std::vector<double> dark_split;
    std::vector<double> efficiencies;

    bool is_ideal() const;
    std::vector<double> resolved_dark_split(std::size_t clicks) const;
    std::vector<double> resolved_efficiencies(std::size_t clicks) const;
};

// eta_j B_j on the signal (+) vacuum space, plus a "vac" outcome
// sum_j (1-eta_j) B_j + |vac><vac|. Input must not already contain "vac".
Povm apply_efficiency(const Povm& p, const DetectorSpec& spec);

// Click elements become (1-d) B_j + d_j I on the same space; an existing
// vacuum element becomes (1-d) B_vac. Completeness is preserved exactly.
Povm apply_dark_counts(const Povm& p, const DetectorSpec& spec);

// p~_ij = (1-d) p_ij + d_j p_i on Bob's axis; a vacuum column (if any)
// receives no dark counts.
JointDistribution forward_dark_counts(const JointDistribution& ideal, const DetectorSpec& spec,
                                      std::optional<int> vac_column = std::nullopt);

// Trusted-device inversion p_ij = (p~_ij - d_j p_i) / (1-d). Entries within
// -1e-10 of zero are clamped; anything below that means the observed data is
// not explainable by the declared dark counts.
JointDistribution invert_dark_counts(const JointDistribution& observed, const DetectorSpec& spec,
                                     std::optional<int> vac_column = std::nullopt);

// Divide click columns by their efficiencies and drop the vacuum column,
// recovering the statistics of the ideal signal-space POVM.
JointDistribution invert_efficiency(const JointDistribution& observed, const DetectorSpec& spec,
                                    int vac_column);

// Append one unused level to the last (Bob's) factor.
DensityMatrix embed_state(const DensityMatrix& rho);

}  // namespace qkdbound
