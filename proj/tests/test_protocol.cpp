#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "qkdbound/bsa.hpp"
#include "qkdbound/info.hpp"
#include "qkdbound/protocol.hpp"
#include "support/random_objects.hpp"

using namespace qkdbound;

TEST_CASE("depolarized Bell family") {
    const DensityMatrix pure = depolarized_bell_state({0.0});
    CHECK((pure.mat() - bell_psi_plus().density().mat()).norm() == doctest::Approx(0));

    const DensityMatrix mixed = depolarized_bell_state({0.5});
    CHECK((mixed.mat() - 0.25 * Eigen::MatrixXcd::Identity(4, 4)).norm() ==
          doctest::Approx(0).epsilon(1e-12));

    const EigResult e = eig_hermitian(depolarized_bell_state({0.2}).herm());
    CHECK(e.values(0) == doctest::Approx(0.7).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) CHECK(e.values(k) == doctest::Approx(0.1).epsilon(1e-12));

    CHECK_THROWS_AS(depolarized_bell_state({0.6}), InvalidArgument);
    CHECK_THROWS_AS(depolarized_bell_state({-0.1}), InvalidArgument);
}

TEST_CASE("protocol POVMs are complete") {
    const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
    CHECK(six.alice.size() == 6);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(2, 2);
    for (const auto& el : six.alice.elements()) sum += el.mat();
    CHECK((sum - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    for (const auto& el : six.alice.elements())
        CHECK(el.trace() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // degenerate weights: effectively the z projectors
    const ProtocolSpec zonly = protocol_povms(ProtocolName::FourState, {1.0, 0.0});
    CHECK(zonly.alice.element(0).mat()(0, 0).real() == doctest::Approx(1));
    CHECK(zonly.alice.element(2).mat().cwiseAbs().maxCoeff() == doctest::Approx(0));

    CHECK_THROWS_AS(protocol_povms(ProtocolName::SixState, {0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(protocol_from_string("eight-state"), InvalidArgument);
}

TEST_CASE("Born tabulation on the Bell state: matched bases perfectly correlated") {
    const ProtocolSpec four = protocol_povms(ProtocolName::FourState);
    const JointDistribution p =
        observed_distribution(bell_psi_plus().density(), four, std::nullopt);
    // z outcomes: i in {0:z0,1:z1}, j same; weight (1/2)^2 per side pair
    CHECK(p.at(0, 0) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(p.at(0, 1) == doctest::Approx(0).epsilon(1e-12));
    CHECK(p.at(1, 0) == doctest::Approx(0).epsilon(1e-12));
    CHECK(p.at(2, 2) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(p.at(2, 3) == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("six-state QBER in the key basis equals e") {
    for (double e : {0.0, 0.05, 0.15, 0.3}) {
        const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
        const JointDistribution p =
            key_basis_distribution(depolarized_bell_state({e}), six, std::nullopt);
        const double qber = p.at(0, 1) + p.at(1, 0);
        CHECK(qber == doctest::Approx(e).epsilon(1e-10));
        CHECK(mutual_information(p) ==
              doctest::Approx(1 - binary_entropy(e)).epsilon(1e-9));
    }
}

TEST_CASE("lossy key-basis mutual information equals eta on the Bell state") {
    DetectorSpec spec;
    spec.efficiencies = {0.15};
    const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
    const JointDistribution p =
        key_basis_distribution(bell_psi_plus().density(), six, spec);
    CHECK(mutual_information(p) == doctest::Approx(0.15).epsilon(1e-10));
}

TEST_CASE("observed marginals match partial-trace Born rules") {
    std::mt19937 rng(5501);
    const DensityMatrix rho = qkdbound::testing::random_density({2, 2}, 4, rng);
    const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
    DetectorSpec spec;
    spec.efficiencies = {0.4};
    spec.dark_total = 1e-5;
    const JointDistribution p = observed_distribution(rho, six, spec);

    const HermitianMatrix rho_a = partial_trace(rho.herm(), {2, 2}, 0);
    const auto pa = p.marginal(0);
    for (std::size_t i = 0; i < six.alice.size(); ++i)
        CHECK(pa[i] == doctest::Approx((six.alice.element(i).mat() * rho_a.mat()).trace().real())
                           .epsilon(1e-10));

    const Povm noisy_bob = apply_dark_counts(apply_efficiency(six.bob, spec), spec);
    const HermitianMatrix rho_b =
        partial_trace(embed_state(rho).herm(), {2, 3}, 1);
    const auto pb = p.marginal(1);
    for (std::size_t j = 0; j < noisy_bob.size(); ++j)
        CHECK(pb[j] ==
              doctest::Approx((noisy_bob.element(j).mat() * rho_b.mat()).trace().real())
                  .epsilon(1e-10));
}

TEST_CASE("key-basis table is independent of the non-key weights") {
    const DensityMatrix rho = depolarized_bell_state({0.07});
    const ProtocolSpec even = protocol_povms(ProtocolName::FourState);
    const ProtocolSpec skew = protocol_povms(ProtocolName::FourState, {0.9, 0.1});
    DetectorSpec spec;
    spec.efficiencies = {0.3};
    spec.dark_total = 1e-6;
    const JointDistribution a = key_basis_distribution(rho, even, spec);
    const JointDistribution b = key_basis_distribution(rho, skew, spec);
    for (std::size_t k = 0; k < a.probs().size(); ++k)
        CHECK(a.probs()[k] == doctest::Approx(b.probs()[k]).epsilon(1e-14));
    CHECK(std::abs(std::accumulate(a.probs().begin(), a.probs().end(), 0.0) - 1.0) <= 1e-12);
}

TEST_CASE("six-state statistics pin the state (tomographic completeness)") {
    for (double e : {0.05, 0.25}) {
        const DensityMatrix rho = depolarized_bell_state({e});
        const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
        const EquivalenceClassSpec spec{six.alice, six.bob,
                                        observed_distribution(rho, six, std::nullopt)};
        const BsaResult r = max_separable_weight(spec);
        CHECK((r.rho_star.mat() - rho.mat()).cwiseAbs().maxCoeff() <= 1e-7);
    }
}
