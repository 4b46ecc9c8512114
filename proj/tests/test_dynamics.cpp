#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fig8/dynamics.hpp"

using namespace fig8;

namespace {

Config random_config(std::mt19937_64& rng, double spread = 1.0) {
    std::uniform_real_distribution<double> uni(-spread, spread);
    Config c;
    for (int j = 0; j < 3; ++j) c[j] = Complex(uni(rng), uni(rng));
    return c;
}

// Independent gradient oracle: central finite differences of U.
Velocity fd_acceleration(const Config& x, const Masses& m, Alpha a, double h) {
    Velocity out;
    for (int j = 0; j < 3; ++j) {
        Config xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double dre = (potential_energy(xp, m, a) - potential_energy(xm, m, a)) / (2 * h);
        xp = x;
        xm = x;
        xp[j] += Complex(0, h);
        xm[j] -= Complex(0, h);
        const double dim = (potential_energy(xp, m, a) - potential_energy(xm, m, a)) / (2 * h);
        out[j] = Complex(dre, dim) / m[j];
    }
    return out;
}

}  // namespace

TEST_CASE("equilateral side 1, unit masses, alpha=1 gives U=3") {
    const Masses m;
    // Equilateral triangle with unit side length.
    const Config x = {Complex(0, 0), Complex(1, 0), Complex(0.5, std::sqrt(3.0) / 2.0)};
    CHECK(potential_energy(x, m, Alpha(1.0)) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("collinear (-1,0),(0,0),(1,0) gives U=2.5 and the known accelerations") {
    const Masses m;
    const Config x = {Complex(-1, 0), Complex(0, 0), Complex(1, 0)};
    CHECK(potential_energy(x, m, Alpha(1.0)) == doctest::Approx(2.5).epsilon(1e-14));

    const Velocity acc = accelerations(x, m, Alpha(1.0));
    CHECK(acc[0].real() == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(acc[0].imag() == doctest::Approx(0.0));
    CHECK(std::abs(acc[1]) == doctest::Approx(0.0));
    CHECK(acc[2].real() == doctest::Approx(-1.25).epsilon(1e-12));

    // Cross-check against the finite-difference oracle.
    const Velocity fd = fd_acceleration(x, m, Alpha(1.0), 1e-6);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(acc[j] - fd[j]) < 1e-7);

    CHECK(moment_of_inertia(x, m) == doctest::Approx(2.0));
}

TEST_CASE("homogeneity U(lambda x) = lambda^-alpha U(x)") {
    std::mt19937_64 rng(7);
    const Masses m{1.3, 0.7, 2.1};
    const Alpha a(1.5);
    const Config x = random_config(rng);
    const double U = potential_energy(x, m, a);
    for (double lam : {0.5, 2.0, 10.0}) {
        Config y;
        for (int j = 0; j < 3; ++j) y[j] = lam * x[j];
        CHECK(potential_energy(y, m, a) ==
              doctest::Approx(U * std::pow(lam, -a.value)).epsilon(1e-12));
    }
}

TEST_CASE("kinetic energy basics") {
    const Masses m;
    CHECK(kinetic_energy({Complex(0, 0), Complex(0, 0), Complex(0, 0)}, m) == 0.0);
    CHECK(kinetic_energy({Complex(1, 0), Complex(-1, 0), Complex(0, 0)}, m) ==
          doctest::Approx(1.0));

    std::mt19937_64 rng(11);
    Velocity v;
    for (int j = 0; j < 3; ++j) v[j] = Complex(rng() % 7 - 3.0, rng() % 5 - 2.0);
    const Masses m2{2, 2, 2};
    CHECK(kinetic_energy(v, m2) == doctest::Approx(2.0 * kinetic_energy(v, m)));
}

TEST_CASE("equilateral equal masses: accelerations point at the centroid") {
    const Masses m;
    const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
    const Config x = {Complex(1, 0), w, w * w};
    const Velocity acc = accelerations(x, m, Alpha(1.2));
    const double mag = std::abs(acc[0]);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(acc[j]) == doctest::Approx(mag).epsilon(1e-12));
        // a_j is anti-parallel to x_j (centroid at origin).
        CHECK(wedge(x[j], acc[j]) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK((acc[j].real() * x[j].real() + acc[j].imag() * x[j].imag()) < 0.0);
    }
}

TEST_CASE("Newton's third law and FD gradient consistency at random configs") {
    std::mt19937_64 rng(42);
    const Masses m{1.1, 2.2, 0.9};
    for (double av : {1.0, 1.5, 1.9}) {
        const Alpha a(av);
        for (int trial = 0; trial < 100; ++trial) {
            Config x = random_config(rng, 2.0);
            if (min_pair_distance(x) < 0.3) continue;
            const Velocity acc = accelerations(x, m, a);
            Complex total{0, 0};
            double amax = 0.0;
            for (int j = 0; j < 3; ++j) {
                total += m[j] * acc[j];
                amax = std::max(amax, std::abs(acc[j]));
            }
            CHECK(std::abs(total) <= 1e-13 * std::max(amax, 1.0));

            const Velocity fd = fd_acceleration(x, m, a, 1e-6);
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(acc[j] - fd[j]) < 1e-6 * std::max(1.0, std::abs(acc[j])));
        }
    }
}

TEST_CASE("angular momentum") {
    const Masses m;
    SUBCASE("real positions and velocities give zero") {
        const Config x = {Complex(1, 0), Complex(-2, 0), Complex(0.5, 0)};
        const Velocity v = {Complex(0.3, 0), Complex(1, 0), Complex(-2, 0)};
        CHECK(angular_momentum(x, v, m) == 0.0);
    }
    SUBCASE("counter-rotating pair gives 2") {
        const Config x = {Complex(1, 0), Complex(-1, 0), Complex(0, 0)};
        const Velocity v = {Complex(0, 1), Complex(0, -1), Complex(0, 0)};
        CHECK(angular_momentum(x, v, m) == doctest::Approx(2.0));
    }
    SUBCASE("rigid rotation at rate omega gives J = omega * I") {
        std::mt19937_64 rng(5);
        const Config x = random_config(rng);
        const double omega = 0.77;
        Velocity v;
        for (int j = 0; j < 3; ++j) v[j] = Complex(0, omega) * x[j];
        CHECK(angular_momentum(x, v, m) ==
              doctest::Approx(omega * moment_of_inertia(x, m)).epsilon(1e-13));
    }
}

TEST_CASE("rotation and translation invariance") {
    std::mt19937_64 rng(9);
    const Masses m{0.8, 1.0, 1.4};
    const Alpha a(1.3);
    const Config x = random_config(rng, 1.5);
    const double U = potential_energy(x, m, a);

    const Complex rot = std::polar(1.0, 1.234);
    Config xr;
    for (int j = 0; j < 3; ++j) xr[j] = rot * x[j];
    CHECK(potential_energy(xr, m, a) == doctest::Approx(U).epsilon(1e-13));

    const Complex shift(0.4, -2.2);
    Config xt;
    for (int j = 0; j < 3; ++j) xt[j] = x[j] + shift;
    CHECK(potential_energy(xt, m, a) == doctest::Approx(U).epsilon(1e-13));

    Velocity v;
    for (int j = 0; j < 3; ++j) v[j] = Complex(j - 1.0, 0.5 * j);
    Velocity vr;
    for (int j = 0; j < 3; ++j) vr[j] = rot * v[j];
    CHECK(angular_momentum(xr, vr, m) ==
          doctest::Approx(angular_momentum(x, v, m)).epsilon(1e-13));
    CHECK(moment_of_inertia(xr, m) == doctest::Approx(moment_of_inertia(x, m)).epsilon(1e-13));
}

TEST_CASE("moment of inertia homogeneity") {
    std::mt19937_64 rng(3);
    const Masses m{1, 2, 3};
    const Config x = random_config(rng);
    Config y;
    for (int j = 0; j < 3; ++j) y[j] = 3.0 * x[j];
    CHECK(moment_of_inertia(y, m) == doctest::Approx(9.0 * moment_of_inertia(x, m)));
}

TEST_CASE("collision input raises CollisionError") {
    const Masses m;
    const Config x = {Complex(0, 0), Complex(0, 0), Complex(1, 0)};
    CHECK_THROWS_AS(potential_energy(x, m, Alpha(1.0)), CollisionError);
    CHECK_THROWS_AS(accelerations(x, m, Alpha(1.0)), CollisionError);
    CHECK_THROWS_AS(energy(x, {Complex(0, 0), Complex(0, 0), Complex(0, 0)}, m, Alpha(1.0)),
                    CollisionError);
}

TEST_CASE("centering map") {
    const Masses m{1, 2, 3};
    std::mt19937_64 rng(17);
    const Config x = random_config(rng, 4.0);
    const Config c = centered(x, m);
    Complex s{0, 0};
    for (int j = 0; j < 3; ++j) s += m[j] * c[j];
    CHECK(std::abs(s) < 1e-12 * std::sqrt(moment_of_inertia(c, m)));
}

TEST_CASE("alpha range is validated") {
    CHECK_THROWS_AS(Alpha(0.5), std::invalid_argument);
    CHECK_THROWS_AS(Alpha(2.0), std::invalid_argument);
    CHECK_NOTHROW(Alpha(1.0));
    CHECK_NOTHROW(Alpha(1.99));
}
