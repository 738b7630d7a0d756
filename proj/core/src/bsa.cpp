#include "qkdbound/bsa.hpp"

#include <cmath>

namespace qkdbound {

namespace {

// Orthogonal-ish Hermitian basis of the d x d operators: e_aa, then
// (e_ab + e_ba)/sqrt(2) and i(e_ab - e_ba)/sqrt(2) for a < b.
std::vector<Eigen::MatrixXcd> hermitian_basis(Eigen::Index d) {
    std::vector<Eigen::MatrixXcd> basis;
    basis.reserve(static_cast<std::size_t>(d) * d);
    const double rt = 1.0 / std::sqrt(2.0);
    for (Eigen::Index a = 0; a < d; ++a) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
        m(a, a) = 1.0;
        basis.push_back(m);
    }
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = a + 1; b < d; ++b) {
            Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(d, d);
            re(a, b) = rt;
            re(b, a) = rt;
            basis.push_back(re);
            Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(d, d);
            im(a, b) = Complex(0, rt);
            im(b, a) = Complex(0, -rt);
            basis.push_back(im);
        }
    return basis;
}

struct ClassDims {
    Eigen::Index da, db, d;
};

ClassDims class_dims(const EquivalenceClassSpec& spec) {
    const Eigen::Index da = spec.alice.dim();
    const Eigen::Index db = spec.bob.dim();
    if (da * db > 6)
        throw UnsupportedDimension(
            "bsa: only dA*dB <= 6 is supported (PPT = separability regime)");
    if (spec.observed.parties() != 2 ||
        spec.observed.shape()[0] != static_cast<int>(spec.alice.size()) ||
        spec.observed.shape()[1] != static_cast<int>(spec.bob.size()))
        throw InvalidArgument("bsa: observed table does not match POVM outcome counts");
    return {da, db, da * db};
}

}  // namespace

SdpProblem build_bsa_sdp(const EquivalenceClassSpec& spec) {
    const auto [da, db, d] = class_dims(spec);
    const int ed = static_cast<int>(2 * d);  // real embedding dimension

    // Blocks: 0 rho, 1 sigma~, 2 sigma~^TB, 3 rho - sigma~.
    SdpProblem p;
    p.block_dims = {ed, ed, ed, ed};
    p.objective = SdpBlockMatrix::zero(p.block_dims);
    p.objective.blocks[1] = -Eigen::MatrixXd::Identity(ed, ed);

    // Statistics: <E(A_i x B_j), rho_emb> = 2 p_ij.
    for (std::size_t i = 0; i < spec.alice.size(); ++i)
        for (std::size_t j = 0; j < spec.bob.size(); ++j) {
            SdpConstraint c;
            c.a = SdpBlockMatrix::zero(p.block_dims);
            c.a.blocks[0] = complex_to_real_embedding(
                kron(spec.alice.element(i).mat(), spec.bob.element(j).mat()));
            c.b = 2.0 * spec.observed.at(static_cast<int>(i), static_cast<int>(j));
            p.constraints.push_back(std::move(c));
        }

    // Normalization: Tr rho = 1 (trace doubles under the embedding).
    {
        SdpConstraint c;
        c.a = SdpBlockMatrix::zero(p.block_dims);
        c.a.blocks[0] = Eigen::MatrixXd::Identity(ed, ed);
        c.b = 2.0;
        p.constraints.push_back(std::move(c));
    }

    // Couplings: block2 = (block1 of sigma~)^TB and block3 = rho - sigma~.
    const auto basis = hermitian_basis(d);
    for (const auto& h : basis) {
        SdpConstraint c;
        c.a = SdpBlockMatrix::zero(p.block_dims);
        c.a.blocks[1] = -complex_to_real_embedding(mat_partial_transpose(h, {da, db}, 1));
        c.a.blocks[2] = complex_to_real_embedding(h);
        c.b = 0.0;
        p.constraints.push_back(std::move(c));
    }
    for (const auto& h : basis) {
        const Eigen::MatrixXd eh = complex_to_real_embedding(h);
        SdpConstraint c;
        c.a = SdpBlockMatrix::zero(p.block_dims);
        c.a.blocks[0] = -eh;
        c.a.blocks[1] = eh;
        c.a.blocks[3] = eh;
        c.b = 0.0;
        p.constraints.push_back(std::move(c));
    }
    return p;
}

BsaResult max_separable_weight(const EquivalenceClassSpec& spec, const BsaOptions& opts) {
    const auto [da, db, d] = class_dims(spec);
    const SdpProblem problem = build_bsa_sdp(spec);
    const SdpSolution sol = solve_sdp(problem, opts.sdp);

    if (sol.status == SdpStatus::Infeasible)
        throw InconsistentStatistics("bsa: no quantum state reproduces the observed statistics");
    if (sol.status == SdpStatus::MaxIterations)
        throw NumericalFailure("bsa: solver hit the iteration cap; best bound " +
                               std::to_string(-sol.objective / 2.0));

    const double lambda = std::clamp(sol.primal[1].trace() / 2.0, 0.0, 1.0);
    const HermitianMatrix rho = real_embedding_to_hermitian(sol.primal[0]);
    const HermitianMatrix sigma_raw = real_embedding_to_hermitian(sol.primal[1]);

    BsaResult out{lambda,
                  clamp_to_density(rho, {da, db}),
                  std::nullopt,
                  std::nullopt,
                  sol.duality_gap,
                  sol.iterations};

    if (lambda > opts.lambda_zero_threshold)
        out.sigma_sep = clamp_to_density(HermitianMatrix(sigma_raw.mat() / lambda), {da, db});
    if (lambda < 1.0 - opts.lambda_one_threshold) {
        const Eigen::MatrixXcd ent = (rho.mat() - sigma_raw.mat()) / (1.0 - lambda);
        out.rho_ent = clamp_to_density(HermitianMatrix(0.5 * (ent + ent.adjoint().eval())),
                                       {da, db});
    }
    return out;
}

bool separability_verdict(const EquivalenceClassSpec& spec, const BsaOptions& opts) {
    return max_separable_weight(spec, opts).lambda_max >= 1.0 - opts.lambda_one_threshold;
}

}  // namespace qkdbound
