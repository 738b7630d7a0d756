#include "qkdbound/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace qkdbound {

SdpBlockMatrix SdpBlockMatrix::zero(const std::vector<int>& dims) {
    SdpBlockMatrix m;
    m.blocks.reserve(dims.size());
    for (int d : dims) m.blocks.push_back(Eigen::MatrixXd::Zero(d, d));
    return m;
}

double SdpBlockMatrix::inner(const SdpBlockMatrix& other) const {
    double s = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        s += blocks[b].cwiseProduct(other.blocks[b]).sum();
    return s;
}

double SdpBlockMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& m : blocks) s += m.squaredNorm();
    return std::sqrt(s);
}

int SdpProblem::total_dim() const {
    int n = 0;
    for (int d : block_dims) n += d;
    return n;
}

void SdpProblem::validate() const {
    if (block_dims.empty()) throw InvalidArgument("SdpProblem: no blocks");
    for (int d : block_dims)
        if (d < 1) throw InvalidArgument("SdpProblem: block dimensions must be positive");
    if (constraints.empty()) throw InvalidArgument("SdpProblem: no constraints");
    auto check = [&](const SdpBlockMatrix& m, const char* what) {
        if (m.blocks.size() != block_dims.size())
            throw InvalidArgument(std::string("SdpProblem: ") + what + " block count mismatch");
        for (std::size_t b = 0; b < m.blocks.size(); ++b) {
            const auto& blk = m.blocks[b];
            if (blk.rows() != block_dims[b] || blk.cols() != block_dims[b])
                throw InvalidArgument(std::string("SdpProblem: ") + what + " block size mismatch");
            if ((blk - blk.transpose()).cwiseAbs().maxCoeff() >
                1e-12 * std::max(1.0, blk.cwiseAbs().maxCoeff()))
                throw InvalidArgument(std::string("SdpProblem: ") + what + " block not symmetric");
        }
    };
    check(objective, "objective");
    for (const auto& c : constraints) check(c.a, "constraint");
}

Eigen::MatrixXd complex_to_real_embedding(const Eigen::MatrixXcd& h) {
    const Eigen::Index d = h.rows();
    Eigen::MatrixXd out(2 * d, 2 * d);
    out.topLeftCorner(d, d) = h.real();
    out.topRightCorner(d, d) = h.imag();
    out.bottomLeftCorner(d, d) = -h.imag();
    out.bottomRightCorner(d, d) = h.real();
    return out;
}

Eigen::MatrixXd hermitian_to_real_embedding(const HermitianMatrix& h) {
    return complex_to_real_embedding(h.mat());
}

HermitianMatrix real_embedding_to_hermitian(const Eigen::MatrixXd& y) {
    if (y.rows() != y.cols() || y.rows() % 2 != 0)
        throw InvalidArgument("real_embedding_to_hermitian: matrix must be square, even dim");
    const Eigen::Index d = y.rows() / 2;
    Eigen::MatrixXd re = 0.5 * (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d));
    Eigen::MatrixXd im = 0.5 * (y.topRightCorner(d, d) - y.topRightCorner(d, d).transpose());
    re = 0.5 * (re + re.transpose().eval());
    Eigen::MatrixXcd h = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
    return HermitianMatrix(h);
}

namespace {

using Blocks = std::vector<Eigen::MatrixXd>;

struct Presolved {
    std::vector<int> keep;          // indices of retained constraints
    std::vector<double> scale;      // Frobenius norm of each retained row
    std::vector<SdpBlockMatrix> a;  // normalized retained constraint matrices
    Eigen::VectorXd b;              // normalized right-hand sides
    bool infeasible = false;
    Eigen::VectorXd farkas;         // full-length certificate when infeasible
};

Eigen::VectorXd svec(const SdpBlockMatrix& m, int total) {
    static const double rt2 = std::sqrt(2.0);
    Eigen::VectorXd v(total);
    int at = 0;
    for (const auto& blk : m.blocks) {
        const Eigen::Index d = blk.rows();
        for (Eigen::Index i = 0; i < d; ++i) {
            v(at++) = blk(i, i);
            for (Eigen::Index j = i + 1; j < d; ++j) v(at++) = rt2 * blk(i, j);
        }
    }
    return v;
}

Presolved presolve(const SdpProblem& p) {
    const int m = static_cast<int>(p.constraints.size());
    int svec_dim = 0;
    for (int d : p.block_dims) svec_dim += d * (d + 1) / 2;

    Presolved out;
    Eigen::MatrixXd v(svec_dim, m);
    std::vector<double> norms(m);
    for (int k = 0; k < m; ++k) {
        norms[k] = p.constraints[k].a.frobenius_norm();
        if (norms[k] < 1e-14) {
            if (std::abs(p.constraints[k].b) > 1e-10) {
                out.infeasible = true;
                out.farkas = Eigen::VectorXd::Zero(m);
                out.farkas(k) = 1.0 / p.constraints[k].b;
                return out;
            }
            v.col(k).setZero();
        } else {
            v.col(k) = svec(p.constraints[k].a, svec_dim) / norms[k];
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    std::vector<char> kept(m, 0);
    for (int i = 0; i < rank; ++i) {
        const int k = static_cast<int>(qr.colsPermutation().indices()(i));
        kept[k] = 1;
    }
    for (int k = 0; k < m; ++k)
        if (kept[k] && norms[k] < 1e-14) kept[k] = 0;

    std::vector<int> keep_idx;
    for (int k = 0; k < m; ++k)
        if (kept[k]) keep_idx.push_back(k);
    if (keep_idx.empty()) throw InvalidArgument("SdpProblem: all constraints vanish");

    Eigen::MatrixXd vk(svec_dim, keep_idx.size());
    Eigen::VectorXd bk(keep_idx.size());
    for (std::size_t i = 0; i < keep_idx.size(); ++i) {
        vk.col(i) = v.col(keep_idx[i]);
        bk(i) = p.constraints[keep_idx[i]].b / norms[keep_idx[i]];
    }

    // Dropped rows must be consistent with the retained ones.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrk(vk);
    for (int k = 0; k < m; ++k) {
        if (kept[k] || norms[k] < 1e-14) continue;
        const Eigen::VectorXd coeff = qrk.solve(v.col(k));
        const double predicted = coeff.dot(bk);
        const double actual = p.constraints[k].b / norms[k];
        if (std::abs(predicted - actual) > 1e-8 * (1.0 + std::abs(actual))) {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
            for (std::size_t i = 0; i < keep_idx.size(); ++i)
                y(keep_idx[i]) = coeff(i) / norms[keep_idx[i]];
            y(k) = -1.0 / norms[k];
            const double bty = predicted - actual;
            out.infeasible = true;
            out.farkas = y / bty;
            return out;
        }
    }

    out.keep = std::move(keep_idx);
    out.b = std::move(bk);
    out.scale.resize(out.keep.size());
    out.a.resize(out.keep.size());
    for (std::size_t i = 0; i < out.keep.size(); ++i) {
        const int k = out.keep[i];
        out.scale[i] = norms[k];
        out.a[i] = p.constraints[k].a;
        for (auto& blk : out.a[i].blocks) blk /= norms[k];
    }
    return out;
}

// Per-block Nesterov-Todd scaling data.
struct Scaling {
    Blocks r, rinv, w;
    std::vector<Eigen::VectorXd> lambda;
};

Eigen::MatrixXd chol_factor(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    // Tiny regularization for iterates grazing the cone boundary.
    const double bump = 1e-14 * std::max(1.0, m.trace());
    Eigen::LLT<Eigen::MatrixXd> llt2(m + bump * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    if (llt2.info() != Eigen::Success)
        throw NumericalFailure("sdp: iterate left the positive definite cone");
    return llt2.matrixL();
}

Scaling nt_scaling(const Blocks& x, const Blocks& s) {
    Scaling sc;
    const std::size_t nb = x.size();
    sc.r.resize(nb);
    sc.rinv.resize(nb);
    sc.w.resize(nb);
    sc.lambda.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const Eigen::MatrixXd lx = chol_factor(x[b]);
        const Eigen::MatrixXd ls = chol_factor(s[b]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(ls.transpose() * lx,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd sig = svd.singularValues();
        const Eigen::VectorXd inv_sqrt = sig.cwiseSqrt().cwiseInverse();
        sc.r[b] = lx * svd.matrixV() * inv_sqrt.asDiagonal();
        sc.rinv[b] = inv_sqrt.asDiagonal() * svd.matrixU().transpose() * ls.transpose();
        sc.w[b] = sc.r[b] * sc.r[b].transpose();
        sc.lambda[b] = sig;
    }
    return sc;
}

struct Direction {
    Blocks dx, ds, dxs, dss;  // dxs/dss are the scaled-frame images
    Eigen::VectorXd dy;
    double dtau = 0.0, dkappa = 0.0;
};

// State of the homogeneous model.
struct HsdState {
    Blocks x, s;
    Eigen::VectorXd y;
    double tau = 1.0, kappa = 1.0;
};

class HsdWorkspace {
public:
    HsdWorkspace(const SdpProblem& p, Presolved pre)
        : dims_(p.block_dims), c_(p.objective), pre_(std::move(pre)) {
        m_ = static_cast<int>(pre_.a.size());
        nu_ = 0;
        for (int d : dims_) nu_ += d;
    }

    int m() const { return m_; }

    Eigen::VectorXd apply_a(const Blocks& x) const {
        Eigen::VectorXd v(m_);
        for (int k = 0; k < m_; ++k) {
            double s = 0.0;
            for (std::size_t b = 0; b < x.size(); ++b)
                s += pre_.a[k].blocks[b].cwiseProduct(x[b]).sum();
            v(k) = s;
        }
        return v;
    }

    Blocks apply_at(const Eigen::VectorXd& y) const {
        Blocks out;
        out.reserve(dims_.size());
        for (std::size_t b = 0; b < dims_.size(); ++b) {
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dims_[b], dims_[b]);
            for (int k = 0; k < m_; ++k) acc += y(k) * pre_.a[k].blocks[b];
            out.push_back(std::move(acc));
        }
        return out;
    }

    double inner_c(const Blocks& x) const {
        double s = 0.0;
        for (std::size_t b = 0; b < x.size(); ++b)
            s += c_.blocks[b].cwiseProduct(x[b]).sum();
        return s;
    }

    const std::vector<int>& dims() const { return dims_; }
    const SdpBlockMatrix& c() const { return c_; }
    const Presolved& pre() const { return pre_; }
    int nu() const { return nu_; }

private:
    std::vector<int> dims_;
    SdpBlockMatrix c_;
    Presolved pre_;
    int m_ = 0;
    int nu_ = 0;
};

Blocks identity_blocks(const std::vector<int>& dims) {
    Blocks b;
    b.reserve(dims.size());
    for (int d : dims) b.push_back(Eigen::MatrixXd::Identity(d, d));
    return b;
}

double min_eig_sym(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Largest alpha in (0, cap] keeping the scaled point plus alpha*delta in the cone.
double step_to_boundary(const std::vector<Eigen::VectorXd>& lambda, const Blocks& delta_scaled,
                        double cap) {
    double alpha = cap;
    for (std::size_t b = 0; b < delta_scaled.size(); ++b) {
        const Eigen::VectorXd inv_sqrt = lambda[b].cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd e =
            inv_sqrt.asDiagonal() * delta_scaled[b] * inv_sqrt.asDiagonal();
        const double lo = min_eig_sym(0.5 * (e + e.transpose()));
        if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
    }
    return alpha;
}

}  // namespace

SdpSolver::SdpSolver(SdpOptions opts) : opts_(opts) {}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts) {
    return SdpSolver(opts).solve(problem);
}

SdpSolution SdpSolver::solve(const SdpProblem& problem) {
    problem.validate();
    const int m_in = static_cast<int>(problem.constraints.size());

    SdpSolution sol;
    Presolved pre = presolve(problem);
    if (pre.infeasible) {
        sol.status = SdpStatus::Infeasible;
        sol.farkas = pre.farkas;
        sol.dual = pre.farkas;
        return sol;
    }

    HsdWorkspace ws(problem, std::move(pre));
    const int m = ws.m();
    sol.presolved_constraints = m;

    HsdState st;
    st.x = identity_blocks(ws.dims());
    st.s = identity_blocks(ws.dims());
    st.y = Eigen::VectorXd::Zero(m);

    const Eigen::VectorXd& b = ws.pre().b;
    double b_inf = 0.0;
    for (const auto& c : problem.constraints) b_inf = std::max(b_inf, std::abs(c.b));
    double c_inf = 0.0;
    for (const auto& blk : problem.objective.blocks)
        c_inf = std::max(c_inf, blk.cwiseAbs().maxCoeff());

    auto record_residuals = [&](SdpIterateStat& stat) {
        // Residuals of the de-homogenized iterate against the original data.
        const Eigen::VectorXd ax = ws.apply_a(st.x);
        double pres = 0.0;
        for (int k = 0; k < m; ++k)
            pres = std::max(pres, ws.pre().scale[k] * std::abs(ax(k) / st.tau - b(k)));
        Blocks aty = ws.apply_at(st.y);
        double dres = 0.0;
        for (std::size_t blk = 0; blk < aty.size(); ++blk) {
            const Eigen::MatrixXd r =
                (aty[blk] + st.s[blk]) / st.tau - ws.c().blocks[blk];
            dres = std::max(dres, r.cwiseAbs().maxCoeff());
        }
        const double pobj = ws.inner_c(st.x) / st.tau;
        const double dobj = b.dot(st.y) / st.tau;
        stat.primal_residual = pres;
        stat.dual_residual = dres;
        stat.gap = std::abs(pobj - dobj);
        stat.tau = st.tau;
        stat.kappa = st.kappa;
        double xs = 0.0;
        for (std::size_t blk = 0; blk < st.x.size(); ++blk)
            xs += st.x[blk].cwiseProduct(st.s[blk]).sum();
        stat.self_dual_slack = xs + st.tau * st.kappa;
        stat.mu = stat.self_dual_slack / (ws.nu() + 1);
    };

    // Keep the best iterate seen; late steps can overshoot once the
    // complementarity drops to machine level.
    HsdState best = st;
    SdpIterateStat best_stat;
    double best_merit = std::numeric_limits<double>::infinity();

    auto finalize = [&](int iter) {
        sol.iterations = iter;
        sol.primal.resize(best.x.size());
        sol.dual_slack.resize(best.s.size());
        for (std::size_t blk = 0; blk < best.x.size(); ++blk) {
            sol.primal[blk] = best.x[blk] / best.tau;
            sol.dual_slack[blk] = best.s[blk] / best.tau;
        }
        sol.dual = Eigen::VectorXd::Zero(m_in);
        for (int k = 0; k < m; ++k)
            sol.dual(ws.pre().keep[k]) = best.y(k) / (best.tau * ws.pre().scale[k]);
        sol.objective = ws.inner_c(best.x) / best.tau;
        sol.dual_objective = b.dot(best.y) / best.tau;
        sol.duality_gap = std::abs(sol.objective - sol.dual_objective);
        sol.primal_residual = best_stat.primal_residual;
        sol.dual_residual = best_stat.dual_residual;
    };

    auto meets_criteria = [&](const SdpIterateStat& stat, double pobj) {
        return stat.primal_residual <= opts_.feas_tol * (1.0 + b_inf) &&
               stat.dual_residual <= opts_.feas_tol * (1.0 + c_inf) &&
               stat.gap <= opts_.gap_tol * (1.0 + std::abs(pobj));
    };

    for (int iter = 0; iter <= opts_.max_iterations; ++iter) {
        SdpIterateStat stat;
        record_residuals(stat);
        if (opts_.keep_trace) sol.trace.push_back(stat);

        const double pobj = ws.inner_c(st.x) / st.tau;
        const double merit = std::max({stat.primal_residual / (1.0 + b_inf),
                                       stat.dual_residual / (1.0 + c_inf),
                                       stat.gap / (1.0 + std::abs(pobj))});
        if (merit < best_merit) {
            best_merit = merit;
            best = st;
            best_stat = stat;
        }
        if (meets_criteria(best_stat, ws.inner_c(best.x) / best.tau)) {
            finalize(iter);
            sol.status = SdpStatus::Optimal;
            return sol;
        }

        // Infeasibility certificate test.
        const double bty = b.dot(st.y);
        if (bty > 1e-10) {
            Blocks aty = ws.apply_at(st.y);
            double top = -std::numeric_limits<double>::infinity();
            for (auto& blk : aty) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk / bty,
                                                                  Eigen::EigenvaluesOnly);
                top = std::max(top, es.eigenvalues().maxCoeff());
            }
            if (top <= 1e-8) {
                sol.status = SdpStatus::Infeasible;
                sol.iterations = iter;
                sol.farkas = Eigen::VectorXd::Zero(m_in);
                for (int k = 0; k < m; ++k)
                    sol.farkas(ws.pre().keep[k]) = st.y(k) / (bty * ws.pre().scale[k]);
                sol.dual = sol.farkas;
                return sol;
            }
        }
        // Below this complementarity level double precision has nothing left.
        if (iter == opts_.max_iterations || stat.mu < 1e-14) break;

        // Residuals of the homogeneous model.
        const Eigen::VectorXd rp = ws.apply_a(st.x) - b * st.tau;
        Blocks rd = ws.apply_at(st.y);
        for (std::size_t blk = 0; blk < rd.size(); ++blk)
            rd[blk] = ws.c().blocks[blk] * st.tau - rd[blk] - st.s[blk];
        const double rg = ws.inner_c(st.x) - b.dot(st.y) + st.kappa;
        const double mu = stat.mu;

        const Scaling sc = nt_scaling(st.x, st.s);

        // Schur complement M_kl = <A_k, W A_l W> and the vector w_k = <A_k, W C W>.
        Eigen::MatrixXd schur(m, m);
        std::vector<Blocks> waw(m);
        for (int l = 0; l < m; ++l) {
            waw[l].resize(ws.dims().size());
            for (std::size_t blk = 0; blk < ws.dims().size(); ++blk)
                waw[l][blk] = sc.w[blk] * ws.pre().a[l].blocks[blk] * sc.w[blk];
        }
        for (int k = 0; k < m; ++k)
            for (int l = 0; l <= k; ++l) {
                double v = 0.0;
                for (std::size_t blk = 0; blk < ws.dims().size(); ++blk)
                    v += ws.pre().a[k].blocks[blk].cwiseProduct(waw[l][blk]).sum();
                schur(k, l) = schur(l, k) = v;
            }
        Blocks wcw(ws.dims().size());
        for (std::size_t blk = 0; blk < ws.dims().size(); ++blk)
            wcw[blk] = sc.w[blk] * ws.c().blocks[blk] * sc.w[blk];
        Eigen::VectorXd wvec(m);
        for (int k = 0; k < m; ++k) {
            double v = 0.0;
            for (std::size_t blk = 0; blk < ws.dims().size(); ++blk)
                v += ws.pre().a[k].blocks[blk].cwiseProduct(wcw[blk]).sum();
            wvec(k) = v;
        }
        double c_wc = 0.0;
        for (std::size_t blk = 0; blk < ws.dims().size(); ++blk)
            c_wc += ws.c().blocks[blk].cwiseProduct(wcw[blk]).sum();

        // Factor with escalating ridge regularization; the Schur complement
        // turns near-singular when the optimal face is degenerate.
        Eigen::LDLT<Eigen::MatrixXd> schur_fac(schur);
        double ridge = 1e-13 * std::max(1.0, schur.trace() / m);
        while (schur_fac.info() != Eigen::Success && ridge < 1.0) {
            Eigen::MatrixXd reg = schur;
            reg.diagonal().array() += ridge;
            schur_fac.compute(reg);
            ridge *= 1e3;
        }
        if (schur_fac.info() != Eigen::Success) break;
        // One step of iterative refinement keeps directions usable when the
        // Schur complement is badly conditioned near degenerate optima.
        auto solve_refined = [&](const Eigen::VectorXd& rhs) {
            Eigen::VectorXd d = schur_fac.solve(rhs);
            d += schur_fac.solve(rhs - schur * d);
            return d;
        };
        const Eigen::VectorXd u = solve_refined(wvec + b);

        auto solve_direction = [&](double eta, const Blocks& d_target, double d_tk) {
            Direction dir;
            // G = R Linv(D) R^T per block.
            Blocks g(ws.dims().size());
            for (std::size_t blk = 0; blk < ws.dims().size(); ++blk) {
                const Eigen::VectorXd& lam = sc.lambda[blk];
                Eigen::MatrixXd linv = d_target[blk];
                for (Eigen::Index i = 0; i < linv.rows(); ++i)
                    for (Eigen::Index j = 0; j < linv.cols(); ++j)
                        linv(i, j) *= 2.0 / (lam(i) + lam(j));
                g[blk] = sc.r[blk] * linv * sc.r[blk].transpose();
            }

            Blocks w_rd_w(ws.dims().size());
            for (std::size_t blk = 0; blk < ws.dims().size(); ++blk)
                w_rd_w[blk] = sc.w[blk] * (eta * rd[blk]) * sc.w[blk];

            Eigen::VectorXd r1 = -eta * rp - ws.apply_a(g) + ws.apply_a(w_rd_w);
            double c_g = ws.inner_c(g);
            double c_wrd = ws.inner_c(w_rd_w);
            const double r2 = -eta * rg - c_g + c_wrd - d_tk / st.tau;

            const Eigen::VectorXd v = solve_refined(r1);
            const double denom = (wvec - b).dot(u) - c_wc - st.kappa / st.tau;
            dir.dtau = (r2 - (wvec - b).dot(v)) / denom;
            dir.dy = v + dir.dtau * u;

            Blocks aty = ws.apply_at(dir.dy);
            dir.ds.resize(ws.dims().size());
            dir.dx.resize(ws.dims().size());
            dir.dxs.resize(ws.dims().size());
            dir.dss.resize(ws.dims().size());
            for (std::size_t blk = 0; blk < ws.dims().size(); ++blk) {
                dir.ds[blk] = ws.c().blocks[blk] * dir.dtau - aty[blk] + eta * rd[blk];
                dir.ds[blk] = 0.5 * (dir.ds[blk] + dir.ds[blk].transpose().eval());
                dir.dx[blk] = g[blk] - sc.w[blk] * dir.ds[blk] * sc.w[blk];
                dir.dx[blk] = 0.5 * (dir.dx[blk] + dir.dx[blk].transpose().eval());
                dir.dxs[blk] = sc.rinv[blk] * dir.dx[blk] * sc.rinv[blk].transpose();
                dir.dss[blk] = sc.r[blk].transpose() * dir.ds[blk] * sc.r[blk];
            }
            dir.dkappa = (d_tk - st.kappa * dir.dtau) / st.tau;
            return dir;
        };

        // Predictor (affine) direction.
        Blocks d_aff(ws.dims().size());
        for (std::size_t blk = 0; blk < ws.dims().size(); ++blk) {
            const Eigen::VectorXd& lam = sc.lambda[blk];
            d_aff[blk] = Eigen::MatrixXd((-lam.cwiseProduct(lam)).asDiagonal());
        }
        const Direction aff = solve_direction(1.0, d_aff, -st.tau * st.kappa);

        double alpha_aff = step_to_boundary(sc.lambda, aff.dxs, 1.0);
        alpha_aff = std::min(alpha_aff, step_to_boundary(sc.lambda, aff.dss, alpha_aff));
        if (aff.dtau < 0.0) alpha_aff = std::min(alpha_aff, -st.tau / aff.dtau);
        if (aff.dkappa < 0.0) alpha_aff = std::min(alpha_aff, -st.kappa / aff.dkappa);

        double mu_aff = (st.tau + alpha_aff * aff.dtau) * (st.kappa + alpha_aff * aff.dkappa);
        for (std::size_t blk = 0; blk < ws.dims().size(); ++blk) {
            const Eigen::MatrixXd xs =
                Eigen::MatrixXd(sc.lambda[blk].asDiagonal()) + alpha_aff * aff.dxs[blk];
            const Eigen::MatrixXd ss =
                Eigen::MatrixXd(sc.lambda[blk].asDiagonal()) + alpha_aff * aff.dss[blk];
            mu_aff += xs.cwiseProduct(ss).sum();
        }
        mu_aff /= (ws.nu() + 1);
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        // Combined corrector direction.
        Blocks d_comb(ws.dims().size());
        for (std::size_t blk = 0; blk < ws.dims().size(); ++blk) {
            const Eigen::VectorXd& lam = sc.lambda[blk];
            const Eigen::MatrixXd cross =
                0.5 * (aff.dxs[blk] * aff.dss[blk] + aff.dss[blk] * aff.dxs[blk]);
            d_comb[blk] = Eigen::MatrixXd((-lam.cwiseProduct(lam)).asDiagonal()) - cross;
            d_comb[blk].diagonal().array() += sigma * mu;
        }
        const double d_tk_comb = sigma * mu - st.tau * st.kappa - aff.dtau * aff.dkappa;
        const Direction dir = solve_direction(1.0 - sigma, d_comb, d_tk_comb);

        // Newton residual of the primal equation measures the quality the
        // ill-conditioned Schur solve actually delivered; a bad direction
        // cannot reduce residuals and only wrecks the iterate.
        const double rp_inf = rp.cwiseAbs().maxCoeff();
        const Eigen::VectorXd newton_res =
            ws.apply_a(dir.dx) - b * dir.dtau + (1.0 - sigma) * rp;
        if (newton_res.cwiseAbs().maxCoeff() > 0.5 * rp_inf + 10.0 * opts_.feas_tol) break;

        double alpha = step_to_boundary(sc.lambda, dir.dxs, 1.0 / 0.98);
        alpha = std::min(alpha, step_to_boundary(sc.lambda, dir.dss, alpha));
        if (dir.dtau < 0.0) alpha = std::min(alpha, -st.tau / dir.dtau);
        if (dir.dkappa < 0.0) alpha = std::min(alpha, -st.kappa / dir.dkappa);
        alpha = std::min(1.0, 0.98 * alpha);
        if (alpha < 1e-10) break;  // stalled

        for (std::size_t blk = 0; blk < ws.dims().size(); ++blk) {
            st.x[blk] += alpha * dir.dx[blk];
            st.s[blk] += alpha * dir.ds[blk];
            st.x[blk] = 0.5 * (st.x[blk] + st.x[blk].transpose().eval());
            st.s[blk] = 0.5 * (st.s[blk] + st.s[blk].transpose().eval());
        }
        st.y += alpha * dir.dy;
        st.tau += alpha * dir.dtau;
        st.kappa += alpha * dir.dkappa;
        sol.iterations = iter + 1;
    }

    // Out of iterations or numerical floor: report the best iterate seen.
    finalize(sol.iterations);
    sol.status = SdpStatus::MaxIterations;
    return sol;
}

void dump_problem(const SdpProblem& p, std::ostream& os) {
    os << p.block_dims.size() << "\n";
    for (std::size_t b = 0; b < p.block_dims.size(); ++b)
        os << p.block_dims[b] << (b + 1 < p.block_dims.size() ? ' ' : '\n');
    auto put = [&os](const SdpBlockMatrix& m) {
        for (const auto& blk : m.blocks) {
            for (Eigen::Index i = 0; i < blk.rows(); ++i)
                for (Eigen::Index j = 0; j < blk.cols(); ++j)
                    os << blk(i, j) << ((j + 1 < blk.cols()) ? ' ' : '\n');
        }
    };
    put(p.objective);
    os << p.constraints.size() << "\n";
    for (const auto& c : p.constraints) {
        os << c.b << "\n";
        put(c.a);
    }
}

}  // namespace qkdbound
