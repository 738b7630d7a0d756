#pragma once

// Self-contained primal-dual interior-point solver for small dense
// semidefinite programs in standard primal form
//
//     minimize  <C, X>
//     subject to <A_k, X> = b_k   (k = 1..m),   X >= 0 block-diagonal,
//
// using Nesterov-Todd scaling with Mehrotra predictor-corrector steps on the
// homogeneous self-dual embedding, so infeasible problems terminate with an
// approximate Farkas certificate instead of diverging. Linearly dependent
// constraints are removed by a rank-revealing presolve. All data is dense
// real symmetric; complex (Hermitian) problems enter through the real
// embedding below.

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "qkdbound/quantum.hpp"

namespace qkdbound {

// One symmetric matrix per PSD block.
struct SdpBlockMatrix {
    std::vector<Eigen::MatrixXd> blocks;

    static SdpBlockMatrix zero(const std::vector<int>& dims);
    double inner(const SdpBlockMatrix& other) const;
    double frobenius_norm() const;
};

struct SdpConstraint {
    SdpBlockMatrix a;
    double b = 0.0;
};

struct SdpProblem {
    std::vector<int> block_dims;
    SdpBlockMatrix objective;
    std::vector<SdpConstraint> constraints;

    int total_dim() const;
    void validate() const;
};

struct SdpOptions {
    double feas_tol = 1e-8;
    double gap_tol = 1e-7;
    int max_iterations = 200;
    bool keep_trace = false;  // record per-iteration statistics
};

enum class SdpStatus { Optimal, Infeasible, MaxIterations };

struct SdpIterateStat {
    double mu = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    // Weak-duality slack of the self-dual model, <X,S> + tau*kappa.
    double self_dual_slack = 0.0;
    double tau = 0.0;
    double kappa = 0.0;
};

struct SdpSolution {
    std::vector<Eigen::MatrixXd> primal;      // X blocks
    Eigen::VectorXd dual;                     // y, one entry per input constraint
    std::vector<Eigen::MatrixXd> dual_slack;  // S blocks
    SdpStatus status = SdpStatus::MaxIterations;
    double objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    int presolved_constraints = 0;
    // Scaled so b^T y = 1; empty unless status == Infeasible.
    Eigen::VectorXd farkas;
    std::vector<SdpIterateStat> trace;
};

// [[Re h, Im h], [-Im h, Re h]]; positive semidefinite iff h is, with every
// eigenvalue doubled in multiplicity and the trace doubled.
Eigen::MatrixXd hermitian_to_real_embedding(const HermitianMatrix& h);
Eigen::MatrixXd complex_to_real_embedding(const Eigen::MatrixXcd& h);

// Inverse on the embedded subspace; symmetrizes away any component of y
// orthogonal to the image of the embedding.
HermitianMatrix real_embedding_to_hermitian(const Eigen::MatrixXd& y);

// A solver instance owns its workspace: reuse one instance sequentially or
// create one per thread.
class SdpSolver {
public:
    explicit SdpSolver(SdpOptions opts = {});
    SdpSolution solve(const SdpProblem& problem);

private:
    SdpOptions opts_;
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts = {});

// Plain-text dump (dimensions, then row-major matrices) for offline
// cross-checking against external solvers.
void dump_problem(const SdpProblem& problem, std::ostream& os);

}  // namespace qkdbound
