#include "qkdbound/protocol.hpp"

#include <cmath>

namespace qkdbound {

namespace {

const char* kBasisNames[3] = {"z", "x", "y"};

int basis_count(ProtocolName name) {
    return name == ProtocolName::FourState ? 2 : 3;
}

Povm weighted_povm(ProtocolName name, const std::vector<double>& weights) {
    const int nbases = basis_count(name);
    std::vector<HermitianMatrix> elements;
    std::vector<std::string> labels;
    for (int basis = 0; basis < nbases; ++basis) {
        const auto projs = basis_projectors(basis);
        for (int outcome = 0; outcome < 2; ++outcome) {
            elements.emplace_back(weights[basis] * projs[outcome].mat());
            labels.push_back(std::string(kBasisNames[basis]) + std::to_string(outcome));
        }
    }
    return Povm(std::move(elements), std::move(labels));
}

JointDistribution born_table(const DensityMatrix& rho, const Povm& alice, const Povm& bob) {
    if (alice.dim() * bob.dim() != rho.dim())
        throw InvalidArgument("observed_distribution: POVM dimensions do not match the state");
    const int na = static_cast<int>(alice.size());
    const int nb = static_cast<int>(bob.size());
    std::vector<double> probs(static_cast<std::size_t>(na) * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const Eigen::MatrixXcd op = kron(alice.element(i).mat(), bob.element(j).mat());
            probs[static_cast<std::size_t>(i) * nb + j] =
                std::max(0.0, (op * rho.mat()).trace().real());
        }
    return JointDistribution({na, nb}, std::move(probs));
}

}  // namespace

ProtocolName protocol_from_string(const std::string& name) {
    if (name == "four-state") return ProtocolName::FourState;
    if (name == "six-state") return ProtocolName::SixState;
    throw InvalidArgument("unknown protocol name: " + name);
}

std::string to_string(ProtocolName name) {
    return name == ProtocolName::FourState ? "four-state" : "six-state";
}

DensityMatrix depolarized_bell_state(ChannelParam e) {
    if (e.e < 0.0 || e.e > 0.5)
        throw InvalidArgument("depolarized_bell_state: e must lie in [0, 1/2]");
    const DensityMatrix bell = bell_psi_plus().density();
    Eigen::MatrixXcd m =
        (1.0 - 2.0 * e.e) * bell.mat() + (e.e / 2.0) * Eigen::MatrixXcd::Identity(4, 4);
    return DensityMatrix(HermitianMatrix(m), {2, 2});
}

PureStateVector bell_psi_plus() {
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(4);
    amp(0) = amp(3) = 1.0 / std::sqrt(2.0);
    return PureStateVector(amp, {2, 2});
}

Eigen::Matrix2cd pauli(int axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
        case 0: m << 1, 0, 0, -1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        default: throw InvalidArgument("pauli: axis must be 0, 1 or 2");
    }
    return m;
}

std::vector<HermitianMatrix> basis_projectors(int axis) {
    const Eigen::Matrix2cd s = pauli(axis);
    const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
    return {HermitianMatrix(0.5 * (eye + s)), HermitianMatrix(0.5 * (eye - s))};
}

ProtocolSpec protocol_povms(ProtocolName name, const std::vector<double>& weights) {
    const int nbases = basis_count(name);
    std::vector<double> w = weights;
    if (w.empty()) w.assign(nbases, 1.0 / nbases);
    if (static_cast<int>(w.size()) != nbases)
        throw InvalidArgument("protocol_povms: weight count does not match basis count");
    double sum = 0.0;
    for (double x : w) {
        if (x < 0.0) throw InvalidArgument("protocol_povms: negative basis weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidArgument("protocol_povms: basis weights must sum to 1");

    return ProtocolSpec{name, weighted_povm(name, w), weighted_povm(name, w), w, 0};
}

Povm key_basis_povm(const ProtocolSpec& spec) {
    auto projs = basis_projectors(spec.key_basis);
    const std::string basis = kBasisNames[spec.key_basis];
    return Povm(std::move(projs), {basis + "0", basis + "1"});
}

JointDistribution observed_distribution(const DensityMatrix& rho, const ProtocolSpec& spec,
                                        const std::optional<DetectorSpec>& detectors) {
    if (!detectors) return born_table(rho, spec.alice, spec.bob);
    const Povm noisy_bob = apply_dark_counts(apply_efficiency(spec.bob, *detectors), *detectors);
    return born_table(embed_state(rho), spec.alice, noisy_bob);
}

JointDistribution key_basis_distribution(const DensityMatrix& rho, const ProtocolSpec& spec,
                                         const std::optional<DetectorSpec>& detectors) {
    const Povm key = key_basis_povm(spec);
    if (!detectors) return born_table(rho, key, key);
    // The conditional device has two active detectors; the equal dark-count
    // split applies to those two outcomes.
    DetectorSpec conditional = *detectors;
    conditional.dark_split.clear();
    const Povm noisy_bob = apply_dark_counts(apply_efficiency(key, conditional), conditional);
    return born_table(embed_state(rho), key, noisy_bob);
}

}  // namespace qkdbound
