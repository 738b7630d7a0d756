#pragma once

// Maximum weight of separability over the equivalence class of states
// compatible with observed statistics, via semidefinite programming with
// separability encoded as PPT (exact for 2x2 and 2x3 systems).

#include <optional>
#include <vector>

#include "qkdbound/detector.hpp"
#include "qkdbound/distribution.hpp"
#include "qkdbound/quantum.hpp"
#include "qkdbound/sdp.hpp"

namespace qkdbound {

// The class S = { rho | Tr((A_i x B_j) rho) = p_ij } defined by the two
// POVMs and the ideal (inverted) observed table.
struct EquivalenceClassSpec {
    Povm alice;
    Povm bob;
    JointDistribution observed;
};

struct BsaOptions {
    // Feasibility at 1e-8 is what degenerate boundary problems (lambda at 1,
    // the separable part grazing the PPT boundary) admit in double precision;
    // still an order under the verdict threshold.
    SdpOptions sdp{1e-8, 1e-8, 200, false};
    // lambda at or above 1 - lambda_one_threshold counts as separable-compatible.
    double lambda_one_threshold = 1e-7;
    // below this, the separable part is not worth normalizing
    double lambda_zero_threshold = 1e-9;
};

struct BsaResult {
    double lambda_max = 0.0;
    DensityMatrix rho_star;                  // one maximizer in S_max
    std::optional<DensityMatrix> sigma_sep;  // normalized separable part
    std::optional<DensityMatrix> rho_ent;    // normalized entangled part
    double duality_gap = 0.0;
    int iterations = 0;
};

// Decision variables rho and the unnormalized separable part sigma~;
// objective max Tr(sigma~); PSD blocks rho, sigma~, sigma~^TB (tied by
// linear coupling), rho - sigma~, all through the real embedding.
// Only dA * dB <= 6 is supported (PPT equals separability there).
SdpProblem build_bsa_sdp(const EquivalenceClassSpec& spec);

BsaResult max_separable_weight(const EquivalenceClassSpec& spec, const BsaOptions& opts = {});

// True iff the observed data could come from a separable state
// (lambda_max >= 1 - lambda_one_threshold).
bool separability_verdict(const EquivalenceClassSpec& spec, const BsaOptions& opts = {});

}  // namespace qkdbound
