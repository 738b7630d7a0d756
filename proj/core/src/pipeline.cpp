#include "qkdbound/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "qkdbound/info.hpp"

namespace qkdbound {

double relative_entropy_bell_diagonal(ChannelParam e) {
    if (e.e < 0.0 || e.e > 0.5)
        throw InvalidArgument("relative_entropy_bell_diagonal: e must lie in [0, 1/2]");
    if (e.e >= 1.0 / 3.0) return 0.0;
    return 1.0 - binary_entropy(1.0 - 1.5 * e.e);
}

namespace {

// Equal-weight statistics of rho under the noisy tomography devices,
// inverted back to the ideal signal-space class.
JointDistribution ideal_class_statistics(const DensityMatrix& rho, const ProtocolSpec& tomo,
                                         const DetectorSpec& detectors) {
    const JointDistribution observed = observed_distribution(rho, tomo, detectors);
    const int vac = observed.shape()[1] - 1;
    const JointDistribution dark_free = invert_dark_counts(observed, detectors, vac);
    return invert_efficiency(dark_free, detectors, vac);
}

}  // namespace

BoundReport bound_for_state(const DensityMatrix& rho, const ProtocolSpec& spec,
                            const DetectorSpec& detectors, const PipelineOptions& opts) {
    // Constraints always come from the equal-weight tomography POVMs; the
    // sifting asymmetry only enters the mutual-information factor.
    const ProtocolSpec tomo = protocol_povms(spec.name);

    BoundReport report;
    report.e = std::numeric_limits<double>::quiet_NaN();
    report.detector = detectors;

    const JointDistribution ideal = ideal_class_statistics(rho, tomo, detectors);
    const BsaResult bsa =
        max_separable_weight(EquivalenceClassSpec{tomo.alice, tomo.bob, ideal}, opts.bsa);

    report.lambda_max = bsa.lambda_max;
    if (bsa.rho_ent) {
        report.i_ent = mutual_information(key_basis_distribution(*bsa.rho_ent, spec, detectors));
        report.upper_bound = (1.0 - bsa.lambda_max) * report.i_ent;
    } else {
        report.i_ent = 0.0;
        report.upper_bound = 0.0;
    }
    report.mutual_info = mutual_information(key_basis_distribution(rho, spec, detectors));
    return report;
}

BoundReport key_rate_upper_bound(const ProtocolSpec& spec, ChannelParam e,
                             const DetectorSpec& detectors, const PipelineOptions& opts) {
    BoundReport report = bound_for_state(depolarized_bell_state(e), spec, detectors, opts);
    report.e = e.e;
    report.e_r = relative_entropy_bell_diagonal(e);
    return report;
}

double mutual_info_bound(const ProtocolSpec& spec, ChannelParam e,
                         const DetectorSpec& detectors) {
    return mutual_information(
        key_basis_distribution(depolarized_bell_state(e), spec, detectors));
}

std::vector<BoundReport> scan(const ProtocolSpec& spec, const std::vector<double>& e_grid,
                              const DetectorSpec& detectors, const PipelineOptions& opts) {
    std::vector<BoundReport> out(e_grid.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= e_grid.size()) return;
            try {
                out[i] = key_rate_upper_bound(spec, ChannelParam{e_grid[i]}, detectors, opts);
            } catch (const std::exception& ex) {
                BoundReport failed;
                failed.e = e_grid[i];
                failed.detector = detectors;
                failed.lambda_max = failed.i_ent = failed.upper_bound = failed.mutual_info =
                    std::numeric_limits<double>::quiet_NaN();
                failed.error = ex.what();
                out[i] = std::move(failed);
            }
        }
    };

    unsigned n = opts.workers > 0 ? static_cast<unsigned>(opts.workers)
                                  : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(e_grid.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace qkdbound
