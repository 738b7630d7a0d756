#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qkdbound/protocol.hpp"
#include "qkdbound/quantum.hpp"
#include "support/random_objects.hpp"

using namespace qkdbound;
using qkdbound::testing::random_density;
using qkdbound::testing::random_hermitian;
using qkdbound::testing::random_unitary;

namespace {

Eigen::MatrixXcd ketbra(int i, int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(i, i) = 1.0;
    return m;
}

// Characteristic polynomial coefficients by Faddeev-LeVerrier; the roots,
// taken from the companion matrix, are an eigenvalue oracle independent of
// the self-adjoint solver.
Eigen::VectorXd charpoly_roots(const Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    std::vector<Complex> c(n + 1);
    c[0] = 1.0;
    Eigen::MatrixXcd mk = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        mk = m * mk + c[k - 1] * Eigen::MatrixXcd::Identity(n, n);
        c[k] = -(m * mk).trace() / static_cast<double>(k);
    }
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -c[n - i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
    Eigen::VectorXd roots = es.eigenvalues().real();
    std::sort(roots.data(), roots.data() + n, std::greater<double>());
    return roots;
}

}  // namespace

TEST_CASE("tensor basics") {
    const HermitianMatrix i2 = HermitianMatrix::identity(2);
    CHECK((tensor(i2, i2).mat() - Eigen::MatrixXcd::Identity(4, 4)).norm() == doctest::Approx(0));

    const HermitianMatrix p0{ketbra(0, 2)}, p1{ketbra(1, 2)};
    Eigen::VectorXcd diag = tensor(p0, p1).mat().diagonal();
    CHECK(diag(0).real() == doctest::Approx(0));
    CHECK(diag(1).real() == doctest::Approx(1));
    CHECK(diag(2).real() == doctest::Approx(0));
    CHECK(diag(3).real() == doctest::Approx(0));

    const HermitianMatrix sz{Eigen::MatrixXcd(pauli(0))};
    const Eigen::VectorXd zz = tensor(sz, sz).mat().diagonal().real();
    CHECK(zz(0) == doctest::Approx(1));
    CHECK(zz(1) == doctest::Approx(-1));
    CHECK(zz(2) == doctest::Approx(-1));
    CHECK(zz(3) == doctest::Approx(1));
}

TEST_CASE("tensor bilinearity and trace multiplicativity on random pairs") {
    std::mt19937 rng(7101);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix a = random_hermitian(3, rng);
        const HermitianMatrix a2 = random_hermitian(3, rng);
        const HermitianMatrix b = random_hermitian(2, rng);
        const HermitianMatrix c = random_hermitian(2, rng);
        CHECK(tensor(a, b).trace() == doctest::Approx(a.trace() * b.trace()).epsilon(1e-10));
        // associativity
        const Eigen::MatrixXcd left = kron(kron(a.mat(), b.mat()), c.mat());
        const Eigen::MatrixXcd right = kron(a.mat(), kron(b.mat(), c.mat()));
        CHECK((left - right).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-12));
        // bilinearity in the left argument
        const Eigen::MatrixXcd lin = kron(2.0 * a.mat() + a2.mat(), b.mat());
        const Eigen::MatrixXcd split = 2.0 * kron(a.mat(), b.mat()) + kron(a2.mat(), b.mat());
        CHECK((lin - split).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-12));
    }
}

TEST_CASE("partial trace basics") {
    const DensityMatrix bell = bell_psi_plus().density();
    const HermitianMatrix reduced = partial_trace(bell.herm(), {2, 2}, 0);
    CHECK((reduced.mat() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm() ==
          doctest::Approx(0).epsilon(1e-12));

    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
    diag.diagonal() << 0.4, 0.1, 0.3, 0.2;
    const HermitianMatrix m{diag};
    const HermitianMatrix ta = partial_trace(m, {2, 2}, 0);
    CHECK(ta.mat()(0, 0).real() == doctest::Approx(0.5));
    CHECK(ta.mat()(1, 1).real() == doctest::Approx(0.5));

    CHECK_THROWS_AS(partial_trace(m, {3, 2}, 0), InvalidArgument);
}

TEST_CASE("partial trace of products is the left factor times the trace of the right") {
    std::mt19937 rng(7102);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix a = random_hermitian(2, rng);
        const HermitianMatrix b = random_hermitian(3, rng);
        const HermitianMatrix ab = tensor(a, b);
        const HermitianMatrix ta = partial_trace(ab, {2, 3}, 0);
        CHECK((ta.mat() - b.trace() * a.mat()).cwiseAbs().maxCoeff() ==
              doctest::Approx(0).epsilon(1e-10));
        // trace preserved
        CHECK(ta.trace() == doctest::Approx(ab.trace()).epsilon(1e-10));
    }
}

TEST_CASE("partial transpose") {
    const HermitianMatrix i4 = HermitianMatrix::identity(4);
    CHECK((partial_transpose(i4, {2, 2}, 1).mat() - i4.mat()).norm() == doctest::Approx(0));

    const DensityMatrix bell = bell_psi_plus().density();
    const EigResult e = eig_hermitian(partial_transpose(bell.herm(), {2, 2}, 1));
    CHECK(e.values(0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(e.values(1) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(e.values(2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(e.values(3) == doctest::Approx(-0.5).epsilon(1e-10));

    std::mt19937 rng(7103);
    const HermitianMatrix a = random_hermitian(2, rng);
    const HermitianMatrix b = random_hermitian(2, rng);
    const HermitianMatrix pt = partial_transpose(tensor(a, b), {2, 2}, 1);
    CHECK((pt.mat() - kron(a.mat(), b.mat().transpose())).cwiseAbs().maxCoeff() ==
          doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("partial transpose is a bitwise involution preserving the trace") {
    std::mt19937 rng(7104);
    for (int rep = 0; rep < 10; ++rep) {
        const HermitianMatrix m = random_hermitian(6, rng);
        const HermitianMatrix once = partial_transpose(m, {2, 3}, 1);
        const HermitianMatrix twice = partial_transpose(once, {2, 3}, 1);
        CHECK((twice.mat() - m.mat()).cwiseAbs().maxCoeff() == 0.0);  // exact
        CHECK(once.trace() == doctest::Approx(m.trace()).epsilon(1e-12));
    }
}

TEST_CASE("eig_hermitian") {
    Eigen::MatrixXcd d2 = Eigen::MatrixXcd::Zero(2, 2);
    d2.diagonal() << 3.0, 1.0;
    const EigResult e = eig_hermitian(HermitianMatrix{d2});
    CHECK(e.values(0) == doctest::Approx(3));
    CHECK(e.values(1) == doctest::Approx(1));

    const EigResult ex = eig_hermitian(HermitianMatrix{Eigen::MatrixXcd(pauli(1))});
    CHECK(ex.values(0) == doctest::Approx(1));
    CHECK(ex.values(1) == doctest::Approx(-1));
    CHECK(std::abs(ex.vectors(0, 0)) == doctest::Approx(1 / std::sqrt(2.0)));

    std::mt19937 rng(7105);
    for (int rep = 0; rep < 10; ++rep) {
        const HermitianMatrix m = random_hermitian(4, rng);
        const EigResult r = eig_hermitian(m);
        // reconstruction and unitarity
        const Eigen::MatrixXcd rec =
            r.vectors * r.values.asDiagonal().toDenseMatrix().cast<Complex>() *
            r.vectors.adjoint();
        CHECK((rec - m.mat()).norm() <= 1e-9 * m.mat().norm());
        CHECK((r.vectors.adjoint() * r.vectors - Eigen::MatrixXcd::Identity(4, 4)).norm() <=
              1e-9);
        // companion-matrix oracle for the spectrum
        const Eigen::VectorXd roots = charpoly_roots(m.mat());
        for (int k = 0; k < 4; ++k)
            CHECK(r.values(k) == doctest::Approx(roots(k)).epsilon(1e-7));
    }
}

TEST_CASE("purify") {
    const DensityMatrix pure{HermitianMatrix{ketbra(0, 2)}, {2}};
    const PureStateVector p = purify(pure);
    CHECK(p.dim() == 2);  // ancilla dimension 1
    CHECK(std::abs(p.amplitudes()(0)) == doctest::Approx(1));

    const DensityMatrix mixed{HermitianMatrix{0.5 * Eigen::MatrixXcd::Identity(2, 2)}, {2}};
    const PureStateVector q = purify(mixed);
    CHECK(q.dim() == 4);
    const HermitianMatrix back = partial_trace(q.density().herm(), {2, 2}, 0);
    CHECK((back.mat() - mixed.mat()).norm() == doctest::Approx(0).epsilon(1e-10));

    const DensityMatrix rho = depolarized_bell_state({0.1});
    const PureStateVector r = purify(rho);
    CHECK(r.dim() == 16);  // dim 4 times rank 4
    CHECK(r.subsystem_dims().size() == 3);
    const HermitianMatrix marginal =
        partial_trace(r.density().herm(), {4, r.subsystem_dims().back()}, 0);
    CHECK((marginal.mat() - rho.mat()).norm() <= 1e-9);
}

TEST_CASE("purify round trip across ranks") {
    std::mt19937 rng(7106);
    for (Eigen::Index rank = 1; rank <= 4; ++rank) {
        const DensityMatrix rho = random_density({2, 2}, rank, rng);
        const PureStateVector p = purify(rho);
        CHECK(p.subsystem_dims().back() == rank);
        const HermitianMatrix back =
            partial_trace(p.density().herm(), {4, rank}, 0);
        CHECK((back.mat() - rho.mat()).norm() <= 1e-9);
    }
}

TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann_entropy(bell_psi_plus().density()) == doctest::Approx(0).epsilon(1e-10));
    const DensityMatrix mixed{HermitianMatrix{0.5 * Eigen::MatrixXcd::Identity(2, 2)}, {2}};
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(1).epsilon(1e-12));

    const double e = 0.2;
    const DensityMatrix rho = depolarized_bell_state({e});
    double expected = 0.0;
    for (double lam : {1 - 1.5 * e, e / 2, e / 2, e / 2}) expected -= lam * std::log2(lam);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("entropy is invariant under unitary conjugation") {
    std::mt19937 rng(7107);
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix rho = random_density({4}, 3, rng);
        const Eigen::MatrixXcd u = random_unitary(4, rng);
        const DensityMatrix rotated{HermitianMatrix{u * rho.mat() * u.adjoint()}, {4}};
        CHECK(von_neumann_entropy(rotated) ==
              doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-9));
    }
}

TEST_CASE("is_psd") {
    CHECK(is_psd(HermitianMatrix::identity(4), 1e-9));
    CHECK(is_psd(HermitianMatrix::zero(3), 1e-9));
    const DensityMatrix bell = bell_psi_plus().density();
    CHECK_FALSE(is_psd(partial_transpose(bell.herm(), {2, 2}, 1), 1e-9));
}

TEST_CASE("hermiticity is enforced at construction") {
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.0, Complex(0.5, 0.2), Complex(0.4, 0.1), 2.0;
    CHECK_THROWS_AS(HermitianMatrix{bad}, InvalidArgument);

    Eigen::MatrixXcd drift(2, 2);
    drift << 1.0, Complex(0.5, 1e-14), Complex(0.5, 1e-14), 2.0;
    const HermitianMatrix ok{drift};
    CHECK((ok.mat() - ok.mat().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}
