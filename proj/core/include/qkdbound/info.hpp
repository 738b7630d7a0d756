#pragma once

// Classical and measured-quantum information measures: Shannon entropies,
// mutual information, conditional mutual information, intrinsic information
// over discrete channels, and ccq-state evaluation.

#include <Eigen/Dense>

#include <vector>

#include "qkdbound/detector.hpp"
#include "qkdbound/distribution.hpp"
#include "qkdbound/quantum.hpp"

namespace qkdbound {

// H(p) in bits with 0 log 0 := 0. Entries below -1e-12 are rejected.
double shannon_entropy(const std::vector<double>& p);

double binary_entropy(double p);

// I(A;B) = H(A) + H(B) - H(A,B) of a two-party table.
double mutual_information(const JointDistribution& p);

// I(A;B|E) of a three-party table, conditioning on the last axis.
// Conditioning events with probability below 1e-14 contribute zero.
double conditional_mutual_information(const JointDistribution& p);

// Row-stochastic transition matrix P(out|in); rows are inputs.
struct Channel {
    explicit Channel(Eigen::MatrixXd transition);

    static Channel identity(int n);
    static Channel constant(int n);  // everything maps to symbol 0

    int input_size() const { return static_cast<int>(p_.rows()); }
    int output_size() const { return static_cast<int>(p_.cols()); }
    const Eigen::MatrixXd& transition() const { return p_; }

private:
    Eigen::MatrixXd p_;
};

// Push the last axis of a three-party table through a channel.
JointDistribution apply_channel(const JointDistribution& p, const Channel& c);

struct SearchConfig {
    int starts = 20;          // random starts besides identity and constant
    int max_iterations = 300; // projected-descent iterations per start
    double tolerance = 1e-9;
    unsigned seed = 0x51b8c2u;
};

struct IntrinsicResult {
    double value = 0.0;
    Channel channel;
};

// min over explored channels E -> E~ (same alphabet) of I(A;B|E~).
// Multi-start projected descent refined by coordinate-wise golden-section
// steps, with an exhaustive grid fallback for 2x2 channels; the result is an
// upper estimate of the true infimum. Alphabets are capped at 6.
IntrinsicResult intrinsic_information(const JointDistribution& p, const SearchConfig& cfg = {});

// Classical outcomes of Alice and Bob alongside Eve's unnormalized
// conditional operators rho_E^{ij} = Tr_AB(A_i B_j rho_ABE).
class CcqState {
public:
    CcqState(int na, int nb, std::vector<Eigen::MatrixXcd> blocks);

    int alice_size() const { return na_; }
    int bob_size() const { return nb_; }
    Eigen::Index eve_dim() const { return blocks_.front().rows(); }
    const Eigen::MatrixXcd& block(int i, int j) const;

private:
    int na_, nb_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

CcqState ccq_state(const DensityMatrix& rho_abe, const Povm& alice, const Povm& bob);

// sum_k p(e_k) S(A;B)_{e_k} for the given Eve POVM; the conditional states
// are classical tables embedded diagonally, so each term is the classical
// mutual information of {Tr(E_k rho_E^{ij})} / p(e_k).
double measured_quantum_intrinsic(const CcqState& ccq, const Povm& eve_povm);

}  // namespace qkdbound
