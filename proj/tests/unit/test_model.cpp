#include "oracles.hpp"

#include "scars/config.hpp"
#include "scars/model.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace scars;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return Vec3(g(rng), g(rng), g(rng)).normalized();
}

Mat3 random_symmetric(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat3 a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
    return 0.5 * (a + a.transpose());
}

} // namespace

TEST_CASE("presets fill the coupling matrix") {
    PresetParams p;
    p.jzz = -1.8;
    const auto ising = make_model(Preset::Ising, p);
    Mat3 expected = Mat3::Zero();
    expected(2, 2) = -1.8;
    CHECK(ising.coupling() == expected);
    CHECK(ising.mu() == Vec3(2.4, 0.0, 0.4));

    const auto xx = reference_xx(20);
    CHECK(xx.coupling()(0, 0) == -1.4);
    CHECK(xx.coupling()(1, 1) == -1.4);
    CHECK(xx.coupling()(2, 2) == 0.0);
    CHECK(xx.n_sites() == 20);

    const auto xxz = reference_xxz(16);
    CHECK(xxz.coupling()(0, 0) == -0.4);
    CHECK(xxz.coupling()(2, 2) == -1.8);

    p.jxx = 1.0;
    p.jyy = 2.0;
    CHECK_THROWS_AS(make_model(Preset::XX, p), std::invalid_argument);
}

TEST_CASE("model validation") {
    CHECK_THROWS(SpinChainModel(Vec3(1, 0, std::nan("")), Mat3::Zero(), 8));
    CHECK_THROWS(SpinChainModel(Vec3(1, 0, 0), Mat3::Zero(), 1));
    CHECK_THROWS(SpinChainModel(Vec3::Zero(), Mat3::Zero(), 8).require_is_compatible());
    CHECK_THROWS(SpinChainModel(Vec3(1, 0, 0), Mat3::Zero(), 6).require_is_compatible());
    CHECK_NOTHROW(SpinChainModel(Vec3(1, 0, 0), Mat3::Zero(), 8).require_is_compatible());
    CHECK_THROWS(SpinMagnitude::from_double(0.7));
    CHECK(SpinMagnitude::from_double(1.5).twice() == 3);
}

TEST_CASE("TI states") {
    const auto y = make_ti_state({std::numbers::pi / 2, std::numbers::pi / 2, Manifold::TI}, 8);
    REQUIRE(y.size() == 8);
    for (std::size_t j = 0; j < 8; ++j) CHECK((y[j] - Vec3::UnitY()).norm() < 1e-15);
    const auto z = make_ti_state({0.0, 1.234, Manifold::TI}, 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK((z[j] - Vec3::UnitZ()).norm() == 0.0);
    const auto x = make_ti_state({std::numbers::pi / 2, 0.0, Manifold::TI}, 12);
    for (std::size_t j = 0; j < 12; ++j) CHECK((x[j] - Vec3::UnitX()).norm() < 1e-15);
}

TEST_CASE("IS states follow the ++-- pattern") {
    const auto s = make_is_state({std::numbers::pi / 2, std::numbers::pi / 2, Manifold::IS}, 8);
    const int pattern[] = {1, 1, -1, -1, 1, 1, -1, -1};
    for (std::size_t j = 0; j < 8; ++j) CHECK((s[j] - pattern[j] * Vec3::UnitY()).norm() < 1e-15);
    CHECK_THROWS_AS(make_is_state({0.3, 0.2, Manifold::IS}, 6), std::invalid_argument);
}

TEST_CASE("spherical chart") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        const Vec3 v = random_unit(rng);
        const auto p = ManifoldPoint::from_vector(v, Manifold::IS);
        CHECK(p.theta >= 0.0);
        CHECK(p.theta <= std::numbers::pi);
        CHECK(p.phi >= 0.0);
        CHECK(p.phi < 2 * std::numbers::pi);
        CHECK((p.unit_vector() - v).norm() < 1e-14);
    }
    CHECK_THROWS(SpinConfiguration({Vec3(1.0, 1e-3, 0.0)}));
    CHECK_NOTHROW(SpinConfiguration({Vec3(1.0, 1e-7, 0.0)}));
}

TEST_CASE("classical energy examples") {
    const int n = 12;
    const SpinChainModel free(Vec3(2.4, 0.0, 0.4), Mat3::Zero(), n);
    const auto along = make_ti_state(ManifoldPoint::from_vector(free.mu().normalized(), Manifold::TI), n);
    CHECK(classical_energy(along, free) == doctest::Approx(n * free.mu().norm() / 2).epsilon(1e-14));

    Mat3 jz = Mat3::Zero();
    jz(2, 2) = -1.8;
    const SpinChainModel ising(Vec3::Zero(), jz, 4);
    const auto up = make_ti_state({0.0, 0.0, Manifold::TI}, 4);
    CHECK(classical_energy(up, ising) == doctest::Approx(4 * -1.8 / 2));
    // quantum expectation on the same product state
    const auto h = oracle::full_hamiltonian(ising.mu(), ising.coupling(), 4);
    const Eigen::VectorXcd psi = oracle::ti_product_state(0.0, 0.0, 4);
    CHECK(psi.dot(h * psi).real() == doctest::Approx(classical_energy(up, ising)).epsilon(1e-14));
}

TEST_CASE("classical energy equals the coherent-state expectation at s = 1/2") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + 2 * (trial % 2);
        const SpinChainModel model(random_unit(rng) * 1.7, random_symmetric(rng), n);
        std::vector<Vec3> spins;
        std::vector<Eigen::Vector2cd> sites;
        for (int j = 0; j < n; ++j) {
            const Vec3 s = random_unit(rng);
            spins.push_back(s);
            const auto p = ManifoldPoint::from_vector(s, Manifold::TI);
            sites.push_back(oracle::coherent(p.theta, p.phi));
        }
        const Eigen::VectorXcd psi = oracle::product_state(sites);
        const auto h = oracle::full_hamiltonian(model.mu(), model.coupling(), n);
        CHECK(classical_energy(SpinConfiguration(spins), model) ==
              doctest::Approx(psi.dot(h * psi).real()).epsilon(1e-12));
    }
}

TEST_CASE("IS configurations carry zero energy") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Mat3 j;
        std::normal_distribution<double> g;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) j(a, b) = g(rng);  // not necessarily symmetric
        const SpinChainModel model(random_unit(rng), j, 16);
        const auto s = make_is_state(ManifoldPoint::from_vector(random_unit(rng), Manifold::IS), 16);
        CHECK(std::abs(classical_energy(s, model)) < 1e-13);
    }
}

TEST_CASE("model config keys") {
    const auto m = model_from_key_values({{"preset", "XXZ"}, {"N", "16"}, {"Jzz", "-1.0"}});
    CHECK(m.n_sites() == 16);
    CHECK(m.coupling()(0, 0) == -0.4);
    CHECK(m.coupling()(2, 2) == -1.0);
    CHECK(model_from_key_values({}).coupling()(2, 2) == -1.8);
    CHECK_THROWS_AS(model_from_key_values({{"preset", "Ising"}, {"Jxx", "1"}}), std::invalid_argument);
    CHECK_THROWS_AS(model_from_key_values({{"colour", "blue"}}), std::invalid_argument);
    CHECK_THROWS_AS(model_from_key_values({{"preset", "Heisenberg"}}), std::invalid_argument);
    const auto custom = model_from_key_values({{"preset", "Custom"}, {"Jxy", "0.3"}, {"Jyx", "0.3"}, {"mu_y", "1"}});
    CHECK(custom.coupling()(0, 1) == 0.3);
    CHECK(custom.mu() == Vec3(2.4, 1.0, 0.4));
}

TEST_CASE("key value parsing") {
    const auto kv = parse_key_values("# comment\npreset = XX  # trailing\n\nN=8\n");
    CHECK(kv.at("preset") == "XX");
    CHECK(kv.at("N") == "8");
    CHECK_THROWS_AS(parse_key_values("N = 8\nN = 12\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_values("just words\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double("mu_x", "abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double("mu_x", "inf"), std::invalid_argument);
    CHECK_THROWS_AS(parse_integer("N", "8.5"), std::invalid_argument);
}
