#pragma once

// End-to-end evaluation: simulate noisy statistics, invert the trusted
// devices, solve the best-separable-approximation problem on the ideal
// class, and report the key-rate upper bound (1 - lambda_max) * I_ent(A;B)
// together with the mutual-information bound and the single-copy relative
// entropy of entanglement comparison curve.

#include <optional>
#include <string>
#include <vector>

#include "qkdbound/bsa.hpp"
#include "qkdbound/detector.hpp"
#include "qkdbound/protocol.hpp"

namespace qkdbound {

struct BoundReport {
    double e = 0.0;  // NaN when the input was a raw state rather than e
    double lambda_max = 0.0;
    double i_ent = 0.0;
    double upper_bound = 0.0;
    double mutual_info = 0.0;
    std::optional<double> e_r;
    DetectorSpec detector;
    std::string error;  // non-empty when a scan point failed
};

struct PipelineOptions {
    BsaOptions bsa;
    int workers = 0;  // 0: hardware concurrency
};

// Single-copy relative entropy of entanglement of the depolarized Bell
// state: 1 - h(1 - 3e/2) for e <= 1/3, else 0. This upper-bounds the
// regularized value E_r^inf, which is out of scope here.
double relative_entropy_bell_diagonal(ChannelParam e);

// The full pipeline for one state: noisy statistics of rho, dark-count and
// efficiency inversion, BSA on the ideal class, then rho_ent measured with
// the noisy key-basis devices. The report's e field is NaN.
BoundReport bound_for_state(const DensityMatrix& rho, const ProtocolSpec& spec,
                            const DetectorSpec& detectors, const PipelineOptions& opts = {});

BoundReport key_rate_upper_bound(const ProtocolSpec& spec, ChannelParam e,
                             const DetectorSpec& detectors, const PipelineOptions& opts = {});

// I(A;B) of the noisy key-basis statistics of the observed state itself.
double mutual_info_bound(const ProtocolSpec& spec, ChannelParam e, const DetectorSpec& detectors);

// One report per grid point, in grid order; per-point failures are recorded
// in the report and the scan continues.
std::vector<BoundReport> scan(const ProtocolSpec& spec, const std::vector<double>& e_grid,
                              const DetectorSpec& detectors, const PipelineOptions& opts = {});

}  // namespace qkdbound
