#include "oracles.hpp"

#include "scars/classical.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <numbers>
#include <random>

using namespace scars;

namespace {

constexpr double pi = std::numbers::pi;

Mat3 rotation(const Vec3& u, double a) { return Eigen::AngleAxisd(a, u).toRotationMatrix(); }

/// (1/T) int R(t)^T J R(t) dt by the trapezoid rule on a periodic integrand,
/// exact here because the integrand is a trigonometric polynomial of degree 2.
Mat3 rotating_average(const Mat3& j, const Vec3& u, int nodes = 64) {
    Mat3 sum = Mat3::Zero();
    for (int k = 0; k < nodes; ++k) {
        const Mat3 r = rotation(u, 2 * pi * k / nodes);
        sum += r.transpose() * j * r;
    }
    return sum / nodes;
}

Mat3 random_symmetric(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat3 a;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) a(i, k) = g(rng);
    return 0.5 * (a + a.transpose());
}

Mat3 adjugate(const Mat3& m) {
    Mat3 adj;
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            Eigen::Matrix2d minor;
            int r = 0;
            for (int a = 0; a < 3; ++a) {
                if (a == k) continue;
                int c = 0;
                for (int b = 0; b < 3; ++b) {
                    if (b == i) continue;
                    minor(r, c++) = m(a, b);
                }
                ++r;
            }
            adj(i, k) = ((i + k) % 2 ? -1.0 : 1.0) * minor.determinant();
        }
    }
    return adj;
}

double ising_closed_form(double jzz, const Vec3& u, const Vec3& s) {
    const double us = u.dot(s);
    return std::sqrt(std::abs(0.25 * jzz * jzz * u.x() * u.x() * ((1 - 3 * u.z() * u.z()) * us * us + 2 * u.z() * u.z())));
}

} // namespace

TEST_CASE("rotating-frame average: closed form against quadrature") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        const Vec3 mu(g(rng), g(rng), g(rng));
        const Mat3 j = random_symmetric(rng);
        const SpinChainModel model(mu, j, 8);
        const FloquetCoupling f = floquet_averaged_coupling(model);
        CHECK((f.jbar - rotating_average(j, mu.normalized())).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(f.jbar.trace() - j.trace()) < 1e-10);
        CHECK((f.jbar * f.u - f.lambda1 * f.u).norm() < 1e-10);
        CHECK(std::abs(f.lambda1 - f.u.dot(j * f.u)) < 1e-12);
        CHECK((f.adjugate() * f.jbar - f.jbar.determinant() * Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((f.adjugate() - adjugate(f.jbar)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("rotating-frame average examples") {
    const Mat3 d = Vec3(-0.4, 1.3, -1.8).asDiagonal();
    const auto f = floquet_averaged_coupling(SpinChainModel(Vec3(0, 0, 2), d, 8));
    CHECK((f.jbar - Mat3(Vec3(0.45, 0.45, -1.8).asDiagonal())).norm() < 1e-14);

    Mat3 zz = Mat3::Zero();
    zz(2, 2) = -1.8;
    CHECK((floquet_averaged_coupling(SpinChainModel(Vec3(0, 0, 1), zz, 8)).jbar - zz).norm() < 1e-14);

    Mat3 asym = Mat3::Zero();
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(floquet_averaged_coupling(SpinChainModel(Vec3(0, 0, 1), asym, 8)), std::invalid_argument);
    CHECK_THROWS_AS(floquet_averaged_coupling(SpinChainModel(Vec3::Zero(), zz, 8)), std::invalid_argument);
}

TEST_CASE("analytical IS exponent") {
    const auto model = reference_ising(8);
    const Vec3 u = model.mu().normalized();

    const auto y = lyapunov_analytical_is(model, Vec3::UnitY());
    CHECK(y.lambda == doctest::Approx(std::sqrt(0.5 * 1.8 * 1.8 * u.x() * u.x() * u.z() * u.z())).epsilon(1e-13));
    CHECK(y.lambda == doctest::Approx(0.2064).epsilon(1e-3));
    CHECK(y.ratio == doctest::Approx(0.0848).epsilon(2e-3));
    CHECK(y.ratio == y.lambda / y.omega);
    CHECK(y.omega == model.mu().norm());
    CHECK(y.method == LyapunovMethod::AnalyticalIS);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        const Vec3 s = Vec3(g(rng), g(rng), g(rng)).normalized();
        CHECK(lyapunov_analytical_is(model, s).lambda == doctest::Approx(ising_closed_form(-1.8, u, s)).epsilon(1e-12));
    }

    const SpinChainModel longitudinal(Vec3(0, 0, 2.43), model.coupling(), 8);
    CHECK(lyapunov_analytical_is(longitudinal, Vec3::UnitY()).lambda == 0.0);
    CHECK(lyapunov_analytical_is(model.with_scaled_coupling(0.0), Vec3::UnitY()).lambda == 0.0);
}

TEST_CASE("linearized spectrum peaks at k = pi/4 with lambda^2 = |alpha|") {
    const auto base = reference_ising(16);
    const auto model = base.with_scaled_coupling(0.05 * base.mu().norm() / 1.8);
    const auto l = is_rotating_frame_linearization(model, Vec3::UnitY());
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(l, false).eigenvalues();
    double re_max = 0.0;
    for (const auto& e : ev) re_max = std::max(re_max, e.real());
    const auto a = lyapunov_analytical_is(model, Vec3::UnitY());
    CHECK(re_max == doctest::Approx(a.lambda).epsilon(0.05));
    CHECK(std::sqrt(std::abs(a.alpha)) == doctest::Approx(a.lambda).epsilon(1e-14));
}

TEST_CASE("monodromy of IS orbits") {
    const ManifoldPoint y{pi / 2, pi / 2, Manifold::IS};

    SUBCASE("free precession is neutral") {
        const auto model = reference_ising(8).with_scaled_coupling(0.0);
        const auto m = monodromy(make_upo(y, model), make_is_state(y, 8), model);
        const Eigen::VectorXd lm = m.log_moduli();
        CHECK(lm.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(lyapunov_monodromy(make_upo(y, model), make_is_state(y, 8), model).lambda == 0.0);
    }
    SUBCASE("volume preservation and radial directions") {
        const auto model = reference_xxz(8);
        const auto m = monodromy(make_upo(y, model), make_is_state(y, 8), model);
        CHECK(std::abs(m.log_abs_determinant()) < 1e-6);
        const Eigen::VectorXd lm = m.log_moduli();
        int unit = 0;
        for (const double x : lm) unit += std::abs(x) < 1e-6 ? 1 : 0;
        CHECK(unit >= 8);
        CHECK(m.closure_error < 1e-6);
    }
    SUBCASE("weak coupling agrees with the closed form") {
        const auto base = reference_ising(16);
        for (const double r : {0.02, 0.05, 0.1}) {
            const auto model = base.with_scaled_coupling(r * base.mu().norm() / 1.8);
            const auto num = lyapunov_monodromy(make_upo(y, model), make_is_state(y, 16), model);
            const auto ana = lyapunov_analytical_is(model, y.unit_vector());
            CHECK(num.lambda == doctest::Approx(ana.lambda).epsilon(0.1));
            CHECK(num.method == LyapunovMethod::Monodromy);
        }
    }
    SUBCASE("longitudinal Ising field is stable") {
        const SpinChainModel model(Vec3(0, 0, 2.43), reference_ising(8).coupling() * 0.05, 8);
        CHECK(lyapunov_monodromy(make_upo(y, model), make_is_state(y, 8), model).lambda < 1e-6);
    }
    SUBCASE("orbit that does not close is rejected") {
        const auto model = reference_ising(8);
        UpoDescriptor wrong = make_upo(y, model);
        wrong.period *= 0.9;
        CHECK_THROWS_AS(monodromy(wrong, make_is_state(y, 8), model), IntegrationError);
    }
}

TEST_CASE("weakly coupled TI orbit is stable") {
    const auto base = reference_ising(8);
    const auto model = base.with_scaled_coupling(0.01 * base.mu().norm() / 1.8);
    const ManifoldPoint y{pi / 2, pi / 2, Manifold::TI};
    CHECK(lyapunov_monodromy(make_upo(y, model), make_ti_state(y, 8), model).lambda == 0.0);
}
