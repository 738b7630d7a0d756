#include "qkdbound/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qkdbound {

namespace {

constexpr double kEventCutoff = 1e-14;
constexpr int kMaxAlphabet = 6;

double plog2p(double p) {
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

}  // namespace

double shannon_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) {
        if (x < -1e-12) throw InvalidArgument("shannon_entropy: negative probability");
        h += plog2p(std::max(0.0, x));
    }
    return h;
}

double binary_entropy(double p) {
    return plog2p(p) + plog2p(1.0 - p);
}

double mutual_information(const JointDistribution& p) {
    if (p.parties() != 2)
        throw InvalidArgument("mutual_information: needs a two-party distribution");
    double hab = 0.0;
    for (double x : p.probs()) hab += plog2p(x);
    return shannon_entropy(p.marginal(0)) + shannon_entropy(p.marginal(1)) - hab;
}

double conditional_mutual_information(const JointDistribution& p) {
    if (p.parties() != 3)
        throw InvalidArgument("conditional_mutual_information: needs a three-party distribution");
    const int na = p.shape()[0], nb = p.shape()[1], ne = p.shape()[2];
    double total = 0.0;
    std::vector<double> cond(static_cast<std::size_t>(na) * nb);
    for (int e = 0; e < ne; ++e) {
        double pe = 0.0;
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b) pe += p.at(a, b, e);
        if (pe < kEventCutoff) continue;

        double ha = 0.0, hb = 0.0, hab = 0.0;
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b) cond[static_cast<std::size_t>(a) * nb + b] = p.at(a, b, e) / pe;
        for (int a = 0; a < na; ++a) {
            double pa = 0.0;
            for (int b = 0; b < nb; ++b) pa += cond[static_cast<std::size_t>(a) * nb + b];
            ha += plog2p(pa);
        }
        for (int b = 0; b < nb; ++b) {
            double pb = 0.0;
            for (int a = 0; a < na; ++a) pb += cond[static_cast<std::size_t>(a) * nb + b];
            hb += plog2p(pb);
        }
        for (double x : cond) hab += plog2p(x);
        total += pe * (ha + hb - hab);
    }
    return total;
}

Channel::Channel(Eigen::MatrixXd transition) : p_(std::move(transition)) {
    if (p_.rows() < 1 || p_.cols() < 1) throw InvalidArgument("Channel: empty transition matrix");
    for (Eigen::Index i = 0; i < p_.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < p_.cols(); ++j) {
            if (p_(i, j) < -1e-12 || p_(i, j) > 1.0 + 1e-12)
                throw InvalidArgument("Channel: transition probability outside [0,1]");
            p_(i, j) = std::clamp(p_(i, j), 0.0, 1.0);
            row += p_(i, j);
        }
        if (std::abs(row - 1.0) > 1e-10)
            throw InvalidArgument("Channel: row does not sum to 1");
    }
}

Channel Channel::identity(int n) {
    return Channel(Eigen::MatrixXd::Identity(n, n));
}

Channel Channel::constant(int n) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    t.col(0).setOnes();
    return Channel(t);
}

JointDistribution apply_channel(const JointDistribution& p, const Channel& c) {
    if (p.parties() != 3) throw InvalidArgument("apply_channel: needs a three-party distribution");
    const int na = p.shape()[0], nb = p.shape()[1], ne = p.shape()[2];
    if (c.input_size() != ne)
        throw InvalidArgument("apply_channel: channel input does not match Eve's alphabet");
    const int no = c.output_size();
    std::vector<double> out(static_cast<std::size_t>(na) * nb * no, 0.0);
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b)
            for (int e = 0; e < ne; ++e) {
                const double v = p.at(a, b, e);
                if (v == 0.0) continue;
                for (int o = 0; o < no; ++o)
                    out[(static_cast<std::size_t>(a) * nb + b) * no + o] += v * c.transition()(e, o);
            }
    return JointDistribution({na, nb, no}, std::move(out));
}

namespace {

// I(A;B|E~) as a function of the raw transition matrix, rows renormalized.
// Works directly on the flattened conditional tables for speed.
class ChannelObjective {
public:
    explicit ChannelObjective(const JointDistribution& p)
        : na_(p.shape()[0]), nb_(p.shape()[1]), ne_(p.shape()[2]), p_(&p) {}

    double operator()(const Eigen::MatrixXd& t) const {
        const int no = static_cast<int>(t.cols());
        double total = 0.0;
        std::vector<double> cond(static_cast<std::size_t>(na_) * nb_);
        std::vector<double> pa(na_), pb(nb_);
        for (int o = 0; o < no; ++o) {
            double pe = 0.0;
            std::fill(cond.begin(), cond.end(), 0.0);
            for (int e = 0; e < ne_; ++e) {
                const double w = t(e, o);
                if (w == 0.0) continue;
                for (int a = 0; a < na_; ++a)
                    for (int b = 0; b < nb_; ++b) {
                        const double v = w * p_->at(a, b, e);
                        cond[static_cast<std::size_t>(a) * nb_ + b] += v;
                        pe += v;
                    }
            }
            if (pe < kEventCutoff) continue;
            std::fill(pa.begin(), pa.end(), 0.0);
            std::fill(pb.begin(), pb.end(), 0.0);
            double ha = 0.0, hb = 0.0, hab = 0.0;
            for (int a = 0; a < na_; ++a)
                for (int b = 0; b < nb_; ++b) {
                    const double v = cond[static_cast<std::size_t>(a) * nb_ + b] / pe;
                    pa[a] += v;
                    pb[b] += v;
                    hab += plog2p(v);
                }
            for (double x : pa) ha += plog2p(x);
            for (double x : pb) hb += plog2p(x);
            total += pe * (ha + hb - hab);
        }
        return total;
    }

private:
    int na_, nb_, ne_;
    const JointDistribution* p_;
};

void project_row_to_simplex(Eigen::VectorXd& v) {
    // Euclidean projection onto the probability simplex (sorted threshold).
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += u[i];
        const double t = (cum - 1.0) / (i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (int i = 0; i < n; ++i) v(i) = std::max(0.0, v(i) - theta);
}

void project_rows(Eigen::MatrixXd& t) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        Eigen::VectorXd row = t.row(i);
        project_row_to_simplex(row);
        t.row(i) = row;
    }
}

// Golden-section minimization of f on [0,1].
template <typename F>
double golden_minimize(F&& f, double tol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Projected gradient descent with numeric gradients and backtracking.
double descend(const ChannelObjective& obj, Eigen::MatrixXd& t, int max_iters, double tol) {
    const double eps = 1e-6;
    double f = obj(t);
    double step = 0.25;
    Eigen::MatrixXd grad(t.rows(), t.cols());
    for (int it = 0; it < max_iters; ++it) {
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = 0; j < t.cols(); ++j) {
                Eigen::MatrixXd tp = t, tm = t;
                tp(i, j) += eps;
                tm(i, j) -= eps;
                project_rows(tp);
                project_rows(tm);
                grad(i, j) = (obj(tp) - obj(tm)) / (2.0 * eps);
            }
        bool moved = false;
        for (int bt = 0; bt < 20; ++bt) {
            Eigen::MatrixXd next = t - step * grad;
            project_rows(next);
            const double fn = obj(next);
            if (fn < f - 1e-15) {
                t = next;
                f = fn;
                moved = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if (!moved || step < tol) break;
    }
    return f;
}

// Cycle over rows and output symbols, sliding each row toward a vertex.
double golden_refine(const ChannelObjective& obj, Eigen::MatrixXd& t, double tol) {
    double f = obj(t);
    for (int cycle = 0; cycle < 8; ++cycle) {
        const double before = f;
        for (Eigen::Index e = 0; e < t.rows(); ++e)
            for (Eigen::Index o = 0; o < t.cols(); ++o) {
                Eigen::RowVectorXd vertex = Eigen::RowVectorXd::Zero(t.cols());
                vertex(o) = 1.0;
                const Eigen::RowVectorXd base = t.row(e);
                auto line = [&](double s) {
                    Eigen::MatrixXd probe = t;
                    probe.row(e) = (1.0 - s) * base + s * vertex;
                    return obj(probe);
                };
                const double s = golden_minimize(line, 1e-7);
                Eigen::MatrixXd cand = t;
                cand.row(e) = (1.0 - s) * base + s * vertex;
                const double fc = obj(cand);
                if (fc < f) {
                    t = cand;
                    f = fc;
                }
            }
        if (before - f < tol) break;
    }
    return f;
}

}  // namespace

IntrinsicResult intrinsic_information(const JointDistribution& p, const SearchConfig& cfg) {
    if (p.parties() != 3)
        throw InvalidArgument("intrinsic_information: needs a three-party distribution");
    const int ne = p.shape()[2];
    if (ne > kMaxAlphabet || p.shape()[0] > kMaxAlphabet || p.shape()[1] > kMaxAlphabet)
        throw UnsupportedDimension("intrinsic_information: alphabet too large (max 6)");

    const ChannelObjective obj(p);

    std::vector<Eigen::MatrixXd> starts;
    starts.push_back(Eigen::MatrixXd::Identity(ne, ne));
    starts.push_back(Channel::constant(ne).transition());
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < cfg.starts; ++s) {
        Eigen::MatrixXd t(ne, ne);
        for (int i = 0; i < ne; ++i) {
            double row = 0.0;
            for (int j = 0; j < ne; ++j) {
                t(i, j) = -std::log(std::max(1e-12, unif(rng)));
                row += t(i, j);
            }
            t.row(i) /= row;
        }
        starts.push_back(t);
    }

    double best = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_t = starts.front();
    for (const auto& s0 : starts) {
        Eigen::MatrixXd t = s0;
        descend(obj, t, cfg.max_iterations, cfg.tolerance);
        const double f = golden_refine(obj, t, cfg.tolerance);
        if (f < best - 1e-15) {
            best = f;
            best_t = t;
        }
    }

    if (ne == 2) {
        // Exhaustive grid over 2x2 row-stochastic channels at step 1/200.
        const int steps = 200;
        for (int ia = 0; ia <= steps; ++ia)
            for (int ib = 0; ib <= steps; ++ib) {
                Eigen::MatrixXd t(2, 2);
                t(0, 0) = static_cast<double>(ia) / steps;
                t(0, 1) = 1.0 - t(0, 0);
                t(1, 0) = static_cast<double>(ib) / steps;
                t(1, 1) = 1.0 - t(1, 0);
                const double f = obj(t);
                if (f < best - 1e-15) {
                    best = f;
                    best_t = t;
                }
            }
        best = golden_refine(obj, best_t, cfg.tolerance);
    }

    return IntrinsicResult{std::max(0.0, best), Channel(best_t)};
}

CcqState::CcqState(int na, int nb, std::vector<Eigen::MatrixXcd> blocks)
    : na_(na), nb_(nb), blocks_(std::move(blocks)) {
    if (na_ < 1 || nb_ < 1 || blocks_.size() != static_cast<std::size_t>(na_) * nb_)
        throw InvalidArgument("CcqState: block table does not match alphabet sizes");
    double total = 0.0;
    for (const auto& blk : blocks_) {
        if (blk.rows() != blk.cols() || blk.rows() != blocks_.front().rows())
            throw InvalidArgument("CcqState: inconsistent block dimensions");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::state_psd)
            throw InvalidArgument("CcqState: block not PSD");
        total += blk.trace().real();
    }
    if (std::abs(total - 1.0) > tol::state_psd)
        throw InvalidArgument("CcqState: block traces do not sum to 1");
}

const Eigen::MatrixXcd& CcqState::block(int i, int j) const {
    return blocks_[static_cast<std::size_t>(i) * nb_ + j];
}

CcqState ccq_state(const DensityMatrix& rho_abe, const Povm& alice, const Povm& bob) {
    const auto& dims = rho_abe.subsystem_dims();
    if (dims.size() != 3)
        throw InvalidArgument("ccq_state: state must have three factors (A, B, E)");
    if (dims[0] != alice.dim() || dims[1] != bob.dim())
        throw InvalidArgument("ccq_state: POVM dimensions do not match the state");
    const Eigen::Index de = dims[2];
    const Eigen::Index dab = dims[0] * dims[1];

    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(alice.size() * bob.size());
    const Eigen::MatrixXcd eye_e = Eigen::MatrixXcd::Identity(de, de);
    for (std::size_t i = 0; i < alice.size(); ++i)
        for (std::size_t j = 0; j < bob.size(); ++j) {
            Eigen::MatrixXcd op =
                kron(kron(alice.element(i).mat(), bob.element(j).mat()), eye_e) * rho_abe.mat();
            Eigen::MatrixXcd blk = mat_partial_trace(op, {dab, de}, 1);
            blocks.push_back(0.5 * (blk + blk.adjoint().eval()));
        }
    return CcqState(static_cast<int>(alice.size()), static_cast<int>(bob.size()),
                    std::move(blocks));
}

double measured_quantum_intrinsic(const CcqState& ccq, const Povm& eve_povm) {
    if (eve_povm.dim() != ccq.eve_dim())
        throw InvalidArgument("measured_quantum_intrinsic: POVM does not act on Eve's space");
    const int na = ccq.alice_size(), nb = ccq.bob_size();
    const int ne = static_cast<int>(eve_povm.size());

    double total = 0.0;
    std::vector<double> cond(static_cast<std::size_t>(na) * nb);
    for (int k = 0; k < ne; ++k) {
        double pe = 0.0;
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                const double v =
                    (eve_povm.element(k).mat() * ccq.block(i, j)).trace().real();
                cond[static_cast<std::size_t>(i) * nb + j] = std::max(0.0, v);
                pe += v;
            }
        if (pe < kEventCutoff) continue;
        for (double& v : cond) v /= pe;
        total += pe * mutual_information(JointDistribution({na, nb}, cond));
    }
    return total;
}

}  // namespace qkdbound
