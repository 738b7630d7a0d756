#pragma once

// Four-state and six-state measurement sets, the depolarizing state family,
// and the observed statistics they induce, with optional detector models.

#include <optional>
#include <string>
#include <vector>

#include "qkdbound/detector.hpp"
#include "qkdbound/distribution.hpp"
#include "qkdbound/quantum.hpp"

namespace qkdbound {

enum class ProtocolName { FourState, SixState };

ProtocolName protocol_from_string(const std::string& name);
std::string to_string(ProtocolName name);

// Depolarizing error probability; equals the key-basis QBER.
struct ChannelParam {
    double e = 0.0;
};

// Measurement bases in the fixed order z, x (, y); key basis defaults to z.
struct ProtocolSpec {
    ProtocolName name;
    Povm alice;
    Povm bob;
    std::vector<double> weights;
    int key_basis = 0;
};

// (1-2e) |psi+><psi+| + e/2 I on two qubits.
DensityMatrix depolarized_bell_state(ChannelParam e);

PureStateVector bell_psi_plus();

Eigen::Matrix2cd pauli(int axis);  // 0: z, 1: x, 2: y

// Rank-one eigenprojectors of the given Pauli axis, outcomes +/-.
std::vector<HermitianMatrix> basis_projectors(int axis);

// Weighted projective POVMs for both sides. Empty weights means the equal
// split used for tomography and for the equivalence-class constraints.
ProtocolSpec protocol_povms(ProtocolName name, const std::vector<double>& weights = {});

// The two ideal key-basis projectors on the signal space.
Povm key_basis_povm(const ProtocolSpec& spec);

// Born-rule table p_ij = Tr((A_i x B_j) rho). With detectors, Bob's POVM is
// transformed (efficiency, then dark counts) and rho is embedded to carry
// the vacuum level; the vacuum outcome is Bob's last column.
JointDistribution observed_distribution(const DensityMatrix& rho, const ProtocolSpec& spec,
                                        const std::optional<DetectorSpec>& detectors);

// Statistics conditioned on both parties choosing the key basis, in the
// asymptotic asymmetric-sifting limit; independent of the basis weights.
// Bob's dark counts split equally over the two active detectors.
JointDistribution key_basis_distribution(const DensityMatrix& rho, const ProtocolSpec& spec,
                                         const std::optional<DetectorSpec>& detectors);

}  // namespace qkdbound
