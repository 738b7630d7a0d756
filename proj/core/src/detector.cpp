#include "qkdbound/detector.hpp"

#include <algorithm>
#include <cmath>

namespace qkdbound {

namespace {
constexpr double kSplitTol = 1e-12;
constexpr double kInvertClamp = 1e-10;
}  // namespace

Povm::Povm(std::vector<HermitianMatrix> elements, std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw InvalidArgument("Povm: no elements");
    if (labels_.size() != elements_.size())
        throw InvalidArgument("Povm: label count does not match element count");
    const Eigen::Index d = elements_.front().dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& e : elements_) {
        if (e.dim() != d) throw InvalidArgument("Povm: mixed element dimensions");
        if (!is_psd(e, tol::povm)) throw InvalidArgument("Povm: element not PSD");
        sum += e.mat();
    }
    if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > tol::povm)
        throw InvalidArgument("Povm: elements do not sum to the identity");
}

bool Povm::has_vacuum() const {
    return std::find(labels_.begin(), labels_.end(), kVacuumLabel) != labels_.end();
}

std::size_t Povm::click_count() const {
    std::size_t n = 0;
    for (const auto& l : labels_)
        if (l != kVacuumLabel) ++n;
    return n;
}

bool DetectorSpec::is_ideal() const {
    if (dark_total != 0.0) return false;
    for (double eta : efficiencies)
        if (eta != 1.0) return false;
    return true;
}

std::vector<double> DetectorSpec::resolved_dark_split(std::size_t clicks) const {
    if (dark_total < 0.0 || dark_total >= 1.0)
        throw InvalidArgument("DetectorSpec: dark count probability must lie in [0,1)");
    if (dark_split.empty())
        return std::vector<double>(clicks, dark_total / static_cast<double>(clicks));
    if (dark_split.size() != clicks)
        throw InvalidArgument("DetectorSpec: dark_split length does not match click outcomes");
    double sum = 0.0;
    for (double dj : dark_split) {
        if (dj < 0.0) throw InvalidArgument("DetectorSpec: negative dark_split entry");
        sum += dj;
    }
    if (std::abs(sum - dark_total) > kSplitTol)
        throw InvalidArgument("DetectorSpec: dark_split does not sum to dark_total");
    return dark_split;
}

std::vector<double> DetectorSpec::resolved_efficiencies(std::size_t clicks) const {
    std::vector<double> etas;
    if (efficiencies.empty())
        etas.assign(clicks, 1.0);
    else if (efficiencies.size() == 1)
        etas.assign(clicks, efficiencies.front());
    else if (efficiencies.size() == clicks)
        etas = efficiencies;
    else
        throw InvalidArgument("DetectorSpec: efficiencies length does not match click outcomes");
    for (double eta : etas)
        if (!(eta > 0.0) || eta > 1.0)
            throw InvalidArgument("DetectorSpec: efficiency must lie in (0,1]");
    return etas;
}

Povm apply_efficiency(const Povm& p, const DetectorSpec& spec) {
    if (p.has_vacuum())
        throw InvalidArgument("apply_efficiency: POVM already contains a vacuum outcome");
    const auto etas = spec.resolved_efficiencies(p.size());
    const Eigen::Index d = p.dim();
    const Eigen::Index dx = d + 1;

    std::vector<HermitianMatrix> elements;
    std::vector<std::string> labels;
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(dx, dx);
    for (std::size_t j = 0; j < p.size(); ++j) {
        Eigen::MatrixXcd ext = Eigen::MatrixXcd::Zero(dx, dx);
        ext.topLeftCorner(d, d) = etas[j] * p.element(j).mat();
        elements.emplace_back(ext);
        labels.push_back(p.label(j));
        vac.topLeftCorner(d, d) += (1.0 - etas[j]) * p.element(j).mat();
    }
    vac(d, d) = 1.0;
    elements.emplace_back(vac);
    labels.push_back(kVacuumLabel);
    return Povm(std::move(elements), std::move(labels));
}

Povm apply_dark_counts(const Povm& p, const DetectorSpec& spec) {
    const auto split = spec.resolved_dark_split(p.click_count());
    const double d = spec.dark_total;
    const Eigen::Index dim = p.dim();
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);

    std::vector<HermitianMatrix> elements;
    std::size_t click = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p.label(j) == kVacuumLabel) {
            elements.emplace_back((1.0 - d) * p.element(j).mat());
        } else {
            elements.emplace_back((1.0 - d) * p.element(j).mat() + split[click] * eye);
            ++click;
        }
    }
    return Povm(std::move(elements), p.labels());
}

namespace {

// Shared loop for the forward map and its inverse; both act on Bob's axis.
JointDistribution dark_count_map(const JointDistribution& in, const DetectorSpec& spec,
                                 std::optional<int> vac_column, bool invert) {
    if (in.parties() != 2)
        throw InvalidArgument("dark count map: needs a two-party distribution");
    const int na = in.shape()[0];
    const int nb = in.shape()[1];
    if (vac_column && (*vac_column < 0 || *vac_column >= nb))
        throw InvalidArgument("dark count map: vacuum column out of range");

    const std::size_t clicks = static_cast<std::size_t>(nb) - (vac_column ? 1 : 0);
    const auto split = spec.resolved_dark_split(clicks);
    const double d = spec.dark_total;

    std::vector<double> dj(nb, 0.0);
    std::size_t click = 0;
    for (int b = 0; b < nb; ++b)
        if (!vac_column || b != *vac_column) dj[b] = split[click++];

    std::vector<double> out(static_cast<std::size_t>(na) * nb, 0.0);
    for (int a = 0; a < na; ++a) {
        double pa = 0.0;
        for (int b = 0; b < nb; ++b) pa += in.at(a, b);
        for (int b = 0; b < nb; ++b) {
            double v;
            if (invert) {
                v = (in.at(a, b) - dj[b] * pa) / (1.0 - d);
                if (v < -kInvertClamp)
                    throw InconsistentStatistics(
                        "invert_dark_counts: observed data not explainable by declared dark counts");
                v = std::max(0.0, v);
            } else {
                v = (1.0 - d) * in.at(a, b) + dj[b] * pa;
            }
            out[static_cast<std::size_t>(a) * nb + b] = v;
        }
    }
    return JointDistribution({na, nb}, std::move(out));
}

}  // namespace

JointDistribution forward_dark_counts(const JointDistribution& ideal, const DetectorSpec& spec,
                                      std::optional<int> vac_column) {
    return dark_count_map(ideal, spec, vac_column, false);
}

JointDistribution invert_dark_counts(const JointDistribution& observed, const DetectorSpec& spec,
                                     std::optional<int> vac_column) {
    return dark_count_map(observed, spec, vac_column, true);
}

JointDistribution invert_efficiency(const JointDistribution& observed, const DetectorSpec& spec,
                                    int vac_column) {
    if (observed.parties() != 2)
        throw InvalidArgument("invert_efficiency: needs a two-party distribution");
    const int na = observed.shape()[0];
    const int nb = observed.shape()[1];
    if (vac_column < 0 || vac_column >= nb)
        throw InvalidArgument("invert_efficiency: vacuum column out of range");
    const auto etas = spec.resolved_efficiencies(static_cast<std::size_t>(nb) - 1);

    std::vector<double> out(static_cast<std::size_t>(na) * (nb - 1), 0.0);
    double total = 0.0;
    for (int a = 0; a < na; ++a) {
        int click = 0;
        for (int b = 0; b < nb; ++b) {
            if (b == vac_column) continue;
            const double v = observed.at(a, b) / etas[click];
            out[static_cast<std::size_t>(a) * (nb - 1) + click] = v;
            total += v;
            ++click;
        }
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw InconsistentStatistics(
            "invert_efficiency: unfolded statistics do not sum to 1; signal leaked into vacuum");
    // Remove the rounding drift so downstream validation at 1e-10 holds.
    for (double& v : out) v /= total;
    return JointDistribution({na, nb - 1}, std::move(out));
}

DensityMatrix embed_state(const DensityMatrix& rho) {
    const auto& dims = rho.subsystem_dims();
    const Eigen::Index db = dims.back();
    const Eigen::Index rest = rho.dim() / db;

    std::vector<Eigen::Index> out_dims = dims;
    out_dims.back() = db + 1;

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rest * (db + 1), rest * (db + 1));
    for (Eigen::Index i = 0; i < rest; ++i)
        for (Eigen::Index j = 0; j < rest; ++j)
            out.block(i * (db + 1), j * (db + 1), db, db) =
                rho.mat().block(i * db, j * db, db, db);
    return DensityMatrix(HermitianMatrix(out), std::move(out_dims));
}

}  // namespace qkdbound
