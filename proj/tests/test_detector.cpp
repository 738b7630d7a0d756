#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qkdbound/detector.hpp"
#include "qkdbound/protocol.hpp"
#include "support/random_objects.hpp"

using namespace qkdbound;
using qkdbound::testing::random_distribution;

namespace {

Povm z_povm() {
    return Povm(basis_projectors(0), {"z0", "z1"});
}

double completeness_error(const Povm& p) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(p.dim(), p.dim());
    for (const auto& e : p.elements()) sum += e.mat();
    return (sum - Eigen::MatrixXcd::Identity(p.dim(), p.dim())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dark counts on ideal projectors") {
    DetectorSpec ideal;
    const Povm same = apply_dark_counts(z_povm(), ideal);
    CHECK((same.element(0).mat() - z_povm().element(0).mat()).norm() == doctest::Approx(0));

    DetectorSpec spec;
    spec.dark_total = 1e-6;
    const Povm noisy = apply_dark_counts(z_povm(), spec);
    const Eigen::MatrixXcd expected =
        (1 - 1e-6) * z_povm().element(0).mat() + 5e-7 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK((noisy.element(0).mat() - expected).cwiseAbs().maxCoeff() ==
          doctest::Approx(0).epsilon(1e-15));
    CHECK(completeness_error(noisy) <= 1e-12);

    DetectorSpec bad;
    bad.dark_total = 1.0;
    CHECK_THROWS_AS(apply_dark_counts(z_povm(), bad), InvalidArgument);
}

TEST_CASE("efficiency extends the space with a vacuum outcome") {
    DetectorSpec unit;
    unit.efficiencies = {1.0};
    const Povm ext = apply_efficiency(z_povm(), unit);
    CHECK(ext.dim() == 3);
    CHECK(ext.size() == 3);
    CHECK(ext.label(2) == kVacuumLabel);
    CHECK(ext.element(2).mat()(2, 2).real() == doctest::Approx(1));
    CHECK(ext.element(2).mat().topLeftCorner(2, 2).cwiseAbs().maxCoeff() ==
          doctest::Approx(0));

    DetectorSpec spec;
    spec.efficiencies = {0.15};
    const Povm lossy = apply_efficiency(z_povm(), spec);
    CHECK(lossy.element(0).mat()(0, 0).real() == doctest::Approx(0.15));
    CHECK(lossy.element(2).mat()(0, 0).real() == doctest::Approx(0.85));
    CHECK(lossy.element(2).mat()(1, 1).real() == doctest::Approx(0.85));
    CHECK(completeness_error(lossy) <= 1e-12);

    CHECK_THROWS_AS(apply_efficiency(lossy, spec), InvalidArgument);  // already extended
    DetectorSpec zero;
    zero.efficiencies = {0.0};
    CHECK_THROWS_AS(apply_efficiency(z_povm(), zero), InvalidArgument);
}

TEST_CASE("efficiency then dark counts stays complete on the extended space") {
    std::mt19937 rng(3301);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        DetectorSpec spec;
        spec.efficiencies = {u(rng), u(rng)};
        spec.dark_total = 1e-4 * u(rng);
        const Povm composed = apply_dark_counts(apply_efficiency(z_povm(), spec), spec);
        CHECK(completeness_error(composed) <= 1e-12);
        for (const auto& e : composed.elements()) CHECK(min_eigenvalue(e) >= -1e-10);
    }
}

TEST_CASE("dark count inversion is the inverse of the forward map") {
    std::mt19937 rng(3302);
    for (int rep = 0; rep < 30; ++rep) {
        const JointDistribution ideal({2, 3}, random_distribution(6, rng));
        DetectorSpec spec;
        spec.dark_total = 1e-3 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const JointDistribution noisy = forward_dark_counts(ideal, spec);
        const JointDistribution back = invert_dark_counts(noisy, spec);
        for (std::size_t k = 0; k < back.probs().size(); ++k)
            CHECK(std::abs(back.probs()[k] - ideal.probs()[k]) <= 1e-12);
    }
}

TEST_CASE("inversion with d = 0 is the identity") {
    std::mt19937 rng(3303);
    const JointDistribution p({2, 2}, random_distribution(4, rng));
    const JointDistribution q = invert_dark_counts(p, DetectorSpec{});
    for (std::size_t k = 0; k < 4; ++k) CHECK(q.probs()[k] == doctest::Approx(p.probs()[k]));
}

TEST_CASE("pure dark-count noise inverts to the original") {
    // Observed data built as the forward image of a product table.
    std::mt19937 rng(3304);
    const auto pa = random_distribution(2, rng);
    std::vector<double> prod(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) prod[static_cast<std::size_t>(a) * 2 + b] = pa[a] * 0.5;
    const JointDistribution ideal({2, 2}, prod);
    DetectorSpec spec;
    spec.dark_total = 2e-4;
    spec.dark_split = {1.5e-4, 0.5e-4};
    const JointDistribution back = invert_dark_counts(forward_dark_counts(ideal, spec), spec);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(back.probs()[k] - ideal.probs()[k]) <= 1e-14);
}

TEST_CASE("statistics that no dark-count model explains are rejected") {
    // All the weight in one column while d_j claims a sizable floor elsewhere.
    std::vector<double> probs = {0.5, 0.0, 0.5, 0.0};
    const JointDistribution observed({2, 2}, probs);
    DetectorSpec spec;
    spec.dark_total = 0.2;
    CHECK_THROWS_AS(invert_dark_counts(observed, spec), InconsistentStatistics);
}

TEST_CASE("vacuum column receives no dark counts") {
    std::mt19937 rng(3305);
    const JointDistribution ideal({2, 3}, random_distribution(6, rng));
    DetectorSpec spec;
    spec.dark_total = 1e-3;
    const JointDistribution noisy = forward_dark_counts(ideal, spec, 2);
    // column 2 only scaled by (1-d)
    for (int a = 0; a < 2; ++a)
        CHECK(noisy.at(a, 2) == doctest::Approx((1 - 1e-3) * ideal.at(a, 2)).epsilon(1e-14));
    const JointDistribution back = invert_dark_counts(noisy, spec, 2);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(std::abs(back.probs()[k] - ideal.probs()[k]) <= 1e-14);
}

TEST_CASE("efficiency inversion recovers signal statistics") {
    const DensityMatrix bell = bell_psi_plus().density();
    const ProtocolSpec tomo = protocol_povms(ProtocolName::SixState);
    DetectorSpec spec;
    spec.efficiencies = {0.15};
    const JointDistribution observed = observed_distribution(bell, tomo, spec);
    // Bob answers vac with probability 1 - eta
    double vac = 0.0;
    for (int a = 0; a < 6; ++a) vac += observed.at(a, 6);
    CHECK(vac == doctest::Approx(0.85).epsilon(1e-12));

    const JointDistribution unfolded =
        invert_efficiency(invert_dark_counts(observed, spec, 6), spec, 6);
    const JointDistribution direct = observed_distribution(bell, tomo, std::nullopt);
    for (std::size_t k = 0; k < direct.probs().size(); ++k)
        CHECK(std::abs(unfolded.probs()[k] - direct.probs()[k]) <= 1e-12);
}

TEST_CASE("embed_state adds one empty level on Bob") {
    const DensityMatrix half{HermitianMatrix{0.5 * Eigen::MatrixXcd::Identity(2, 2)}, {2}};
    const DensityMatrix emb = embed_state(half);
    CHECK(emb.dim() == 3);
    CHECK(emb.mat()(0, 0).real() == doctest::Approx(0.5));
    CHECK(emb.mat()(2, 2).real() == doctest::Approx(0));

    const DensityMatrix bell = bell_psi_plus().density();
    const DensityMatrix bemb = embed_state(bell);
    CHECK(bemb.dim() == 6);
    CHECK(bemb.herm().trace() == doctest::Approx(1).epsilon(1e-12));
    // nonzero block identical
    CHECK(bemb.mat()(0, 0).real() == doctest::Approx(0.5));
    CHECK(bemb.mat()(0, 4).real() == doctest::Approx(0.5));

    std::mt19937 rng(3306);
    const DensityMatrix r = qkdbound::testing::random_density({2, 2}, 4, rng);
    CHECK(embed_state(r).herm().trace() == doctest::Approx(1).epsilon(1e-12));
}
