#include "qkdbound/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace qkdbound {

namespace {

Eigen::Index product(const std::vector<Eigen::Index>& dims) {
    Eigen::Index p = 1;
    for (Eigen::Index d : dims) p *= d;
    return p;
}

void check_dims(const Eigen::MatrixXcd& m, const std::vector<Eigen::Index>& dims,
                int index, const char* what) {
    if (m.rows() != m.cols()) throw InvalidArgument("matrix is not square");
    if (dims.empty()) throw InvalidArgument("empty subsystem dimension list");
    for (Eigen::Index d : dims)
        if (d < 1) throw InvalidArgument("subsystem dimensions must be positive");
    if (product(dims) != m.rows())
        throw InvalidArgument("subsystem dimensions do not match matrix dimension");
    if (index < 0 || index >= static_cast<int>(dims.size()))
        throw InvalidArgument(std::string(what) + ": subsystem index out of range");
}

std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
    std::vector<Eigen::Index> s(dims.size());
    Eigen::Index acc = 1;
    for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
        s[f] = acc;
        acc *= dims[f];
    }
    return s;
}

}  // namespace

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd mat_partial_trace(const Eigen::MatrixXcd& m,
                                   const std::vector<Eigen::Index>& dims, int keep) {
    check_dims(m, dims, keep, "partial_trace");
    const auto stride = strides_of(dims);
    const Eigen::Index dk = dims[keep];
    const Eigen::Index rest = m.rows() / dk;

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (Eigen::Index r = 0; r < rest; ++r) {
        // Decompose r over the non-kept axes to get the common offset.
        Eigen::Index offset = 0;
        Eigen::Index rem = r;
        for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
            if (f == keep) continue;
            offset += (rem % dims[f]) * stride[f];
            rem /= dims[f];
        }
        for (Eigen::Index x = 0; x < dk; ++x)
            for (Eigen::Index y = 0; y < dk; ++y)
                out(x, y) += m(offset + x * stride[keep], offset + y * stride[keep]);
    }
    return out;
}

Eigen::MatrixXcd mat_partial_transpose(const Eigen::MatrixXcd& m,
                                       const std::vector<Eigen::Index>& dims, int which) {
    check_dims(m, dims, which, "partial_transpose");
    const auto stride = strides_of(dims);
    const Eigen::Index sw = stride[which];
    const Eigen::Index dw = dims[which];

    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Eigen::Index iw = (i / sw) % dw;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Eigen::Index jw = (j / sw) % dw;
            out(i + (jw - iw) * sw, j + (iw - jw) * sw) = m(i, j);
        }
    }
    return out;
}

Eigen::VectorXcd basis_ket(Eigen::Index i, Eigen::Index dim) {
    if (i < 0 || i >= dim) throw InvalidArgument("basis_ket: index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(i) = 1.0;
    return v;
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw InvalidArgument("HermitianMatrix: matrix must be square with dim >= 1");
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (asym > tol::hermiticity * scale)
        throw InvalidArgument("HermitianMatrix: input is not Hermitian");
    m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
    return HermitianMatrix(Eigen::MatrixXcd::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
    return HermitianMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(kron(a.mat(), b.mat()));
}

HermitianMatrix partial_trace(const HermitianMatrix& m,
                              const std::vector<Eigen::Index>& dims, int keep) {
    return HermitianMatrix(mat_partial_trace(m.mat(), dims, keep));
}

HermitianMatrix partial_transpose(const HermitianMatrix& m,
                                  const std::vector<Eigen::Index>& dims, int which) {
    return HermitianMatrix(mat_partial_transpose(m.mat(), dims, which));
}

EigResult eig_hermitian(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.mat());
    if (es.info() != Eigen::Success)
        throw NumericalFailure("eig_hermitian: eigendecomposition failed");
    EigResult r;
    r.values = es.eigenvalues().reverse();
    r.vectors = es.eigenvectors().rowwise().reverse();
    return r;
}

double min_eigenvalue(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.mat(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("min_eigenvalue: eigendecomposition failed");
    return es.eigenvalues().minCoeff();
}

bool is_psd(const HermitianMatrix& m, double tol) {
    return min_eigenvalue(m) >= -tol;
}

DensityMatrix::DensityMatrix(HermitianMatrix m, std::vector<Eigen::Index> subsystem_dims)
    : m_(std::move(m)), dims_(std::move(subsystem_dims)) {
    if (dims_.empty()) dims_ = {m_.dim()};
    if (product(dims_) != m_.dim())
        throw InvalidArgument("DensityMatrix: subsystem dimensions do not match");
    if (std::abs(m_.trace() - 1.0) > tol::state_trace)
        throw InvalidArgument("DensityMatrix: trace is not 1");
    if (!is_psd(m_, tol::state_psd))
        throw InvalidArgument("DensityMatrix: not positive semidefinite");
}

DensityMatrix clamp_to_density(const HermitianMatrix& m, std::vector<Eigen::Index> dims) {
    EigResult e = eig_hermitian(m);
    Eigen::VectorXd vals = e.values.cwiseMax(0.0);
    const double total = vals.sum();
    if (total <= 0.0)
        throw NumericalFailure("clamp_to_density: matrix has no positive part");
    vals /= total;
    Eigen::MatrixXcd out =
        e.vectors * vals.asDiagonal().toDenseMatrix().cast<Complex>() * e.vectors.adjoint();
    return DensityMatrix(HermitianMatrix(out), std::move(dims));
}

PureStateVector::PureStateVector(Eigen::VectorXcd amplitudes,
                                 std::vector<Eigen::Index> subsystem_dims)
    : amp_(std::move(amplitudes)), dims_(std::move(subsystem_dims)) {
    if (dims_.empty()) dims_ = {amp_.size()};
    if (product(dims_) != amp_.size())
        throw InvalidArgument("PureStateVector: subsystem dimensions do not match");
    if (std::abs(amp_.squaredNorm() - 1.0) > tol::state_trace)
        throw InvalidArgument("PureStateVector: not normalized");
}

DensityMatrix PureStateVector::density() const {
    return DensityMatrix(HermitianMatrix(amp_ * amp_.adjoint()), dims_);
}

PureStateVector purify(const DensityMatrix& rho) {
    EigResult e = eig_hermitian(rho.herm());
    Eigen::Index rank = 0;
    while (rank < e.values.size() && e.values(rank) > tol::eig_cutoff) ++rank;
    if (rank == 0) throw InvalidArgument("purify: state has no spectral weight");

    const Eigen::Index d = rho.dim();
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(d * rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        const double w = std::sqrt(e.values(k));
        for (Eigen::Index i = 0; i < d; ++i) amp(i * rank + k) = w * e.vectors(i, k);
    }
    amp /= amp.norm();

    std::vector<Eigen::Index> dims = rho.subsystem_dims();
    dims.push_back(rank);
    return PureStateVector(std::move(amp), std::move(dims));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    EigResult e = eig_hermitian(rho.herm());
    double s = 0.0;
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
        const double lam = e.values(k);
        if (lam > tol::eig_cutoff) s -= lam * std::log2(lam);
    }
    return std::max(0.0, s);
}

double purity(const DensityMatrix& rho) {
    return (rho.mat() * rho.mat()).trace().real();
}

}  // namespace qkdbound
