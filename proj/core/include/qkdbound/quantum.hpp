#pragma once

// Dense complex linear algebra for small finite-dimensional quantum objects:
// Hermitian matrices, density operators, tensor products, partial trace and
// partial transpose, purification and entropies. Everything is a value type
// and every function is pure; entropies are in bits throughout.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "qkdbound/errors.hpp"

namespace qkdbound {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double state_trace = 1e-10;
inline constexpr double state_psd = 1e-9;
// Eigenvalues below this count as zero in rank and entropy computations.
inline constexpr double eig_cutoff = 1e-12;
inline constexpr double povm = 1e-9;
}  // namespace tol

// Kronecker product; the left factor carries the slowest-varying index.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Trace out every factor except dims[keep]. Valid for any square matrix
// whose dimension equals the product of dims.
Eigen::MatrixXcd mat_partial_trace(const Eigen::MatrixXcd& m,
                                   const std::vector<Eigen::Index>& dims, int keep);

// Transpose the factor dims[which], identity on the rest.
Eigen::MatrixXcd mat_partial_transpose(const Eigen::MatrixXcd& m,
                                       const std::vector<Eigen::Index>& dims, int which);

Eigen::VectorXcd basis_ket(Eigen::Index i, Eigen::Index dim);

// Hermitian square matrix. Construction symmetrizes (m + m^dagger)/2 to
// absorb floating-point drift below tol::hermiticity and rejects genuinely
// non-Hermitian input.
class HermitianMatrix {
public:
    explicit HermitianMatrix(Eigen::MatrixXcd m);

    static HermitianMatrix zero(Eigen::Index dim);
    static HermitianMatrix identity(Eigen::Index dim);

    Eigen::Index dim() const { return m_.rows(); }
    const Eigen::MatrixXcd& mat() const { return m_; }
    double trace() const { return m_.trace().real(); }

private:
    Eigen::MatrixXcd m_;
};

HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b);

HermitianMatrix partial_trace(const HermitianMatrix& m,
                              const std::vector<Eigen::Index>& dims, int keep);

HermitianMatrix partial_transpose(const HermitianMatrix& m,
                                  const std::vector<Eigen::Index>& dims, int which);

struct EigResult {
    Eigen::VectorXd values;    // descending
    Eigen::MatrixXcd vectors;  // orthonormal columns, same order
};

EigResult eig_hermitian(const HermitianMatrix& m);

double min_eigenvalue(const HermitianMatrix& m);

// True iff the minimum eigenvalue is >= -tol.
bool is_psd(const HermitianMatrix& m, double tol);

// Unit-trace positive semidefinite operator on a tensor product of
// subsystems. subsystem_dims must multiply out to the matrix dimension;
// Alice is the left (slowest-varying) factor throughout.
class DensityMatrix {
public:
    DensityMatrix(HermitianMatrix m, std::vector<Eigen::Index> subsystem_dims);

    const HermitianMatrix& herm() const { return m_; }
    const Eigen::MatrixXcd& mat() const { return m_.mat(); }
    Eigen::Index dim() const { return m_.dim(); }
    const std::vector<Eigen::Index>& subsystem_dims() const { return dims_; }

private:
    HermitianMatrix m_;
    std::vector<Eigen::Index> dims_;
};

// Floor tiny negative eigenvalues at zero and renormalize the trace.
// Intended for ingesting solver output that is PSD only up to its
// documented tolerance.
DensityMatrix clamp_to_density(const HermitianMatrix& m, std::vector<Eigen::Index> dims);

class PureStateVector {
public:
    PureStateVector(Eigen::VectorXcd amplitudes, std::vector<Eigen::Index> subsystem_dims);

    const Eigen::VectorXcd& amplitudes() const { return amp_; }
    Eigen::Index dim() const { return amp_.size(); }
    const std::vector<Eigen::Index>& subsystem_dims() const { return dims_; }

    DensityMatrix density() const;

private:
    Eigen::VectorXcd amp_;
    std::vector<Eigen::Index> dims_;
};

// Purification of rho on dim(rho) * rank(rho) space; the ancilla is appended
// as the last (fastest-varying) factor and its dimension is the number of
// eigenvalues above tol::eig_cutoff.
PureStateVector purify(const DensityMatrix& rho);

// -Tr(rho log2 rho); eigenvalues below tol::eig_cutoff contribute zero.
double von_neumann_entropy(const DensityMatrix& rho);

// Tr(rho^2).
double purity(const DensityMatrix& rho);

}  // namespace qkdbound
