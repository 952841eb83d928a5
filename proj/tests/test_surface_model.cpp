#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torcode/surface_model.hpp"

using namespace torcode;

static std::mt19937_64 rng(12345);
static TorusPoint rand_point() {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    return {U(rng), U(rng)};
}

TEST_CASE("wrap and torus metric") {
    CHECK(wrap01(1.25) == doctest::Approx(0.25));
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(3.0) == 0.0);
    CHECK(torus_dist({0.95, 0.0}, {0.05, 0.0}) == doctest::Approx(0.1));
    CHECK(torus_dist({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    // exp/log round trip
    TorusPoint x{0.9, 0.1};
    Vec2 v{0.2, -0.3};
    Vec2 w = log_chart(x, exp_chart(x, v));
    CHECK(w.x == doctest::Approx(v.x).epsilon(1e-14));
    CHECK(w.y == doctest::Approx(v.y).epsilon(1e-14));
}

TEST_CASE("cat map basics") {
    auto f = make_map("cat");
    // A = [[2,1],[1,1]]: f(1/2, 1/2) = (3/2, 1) = (1/2, 0)
    TorusPoint y = f->forward({0.5, 0.5});
    CHECK(y.u == 0.5);
    CHECK(y.v == 0.0);
    CHECK(f->d_forward({0.3, 0.7}).det() == doctest::Approx(1.0));
    // fixed point at origin
    TorusPoint z = f->forward({0.0, 0.0});
    CHECK(z.u == 0.0);
    CHECK(z.v == 0.0);
}

TEST_CASE("backward inverts forward") {
    for (auto spec : {"cat", "perturbed_cat:0.05", "standard:6.0"}) {
        auto f = make_map(spec);
        for (int i = 0; i < 200; ++i) {
            TorusPoint x = rand_point();
            CHECK(torus_dist(f->backward(f->forward(x)), x) < 1e-12);
            CHECK(torus_dist(f->forward(f->backward(x)), x) < 1e-12);
        }
    }
}

TEST_CASE("jacobians match finite differences") {
    for (auto spec : {"cat", "perturbed_cat:0.05", "standard:6.0"}) {
        auto f = make_map(spec);
        double h = 1e-6;
        for (int i = 0; i < 100; ++i) {
            TorusPoint x = rand_point();
            Mat2 J = f->d_forward(x);
            Vec2 du = (torus_diff(f->forward(exp_chart(x, {-h, 0})),
                                  f->forward(exp_chart(x, {h, 0})))) *
                      (1.0 / (2 * h));
            Vec2 dv = (torus_diff(f->forward(exp_chart(x, {0, -h})),
                                  f->forward(exp_chart(x, {0, h})))) *
                      (1.0 / (2 * h));
            CHECK(std::fabs(J.a - du.x) < 1e-7);
            CHECK(std::fabs(J.c - du.y) < 1e-7);
            CHECK(std::fabs(J.b - dv.x) < 1e-7);
            CHECK(std::fabs(J.d - dv.y) < 1e-7);
            // d_backward is the inverse at the image
            Mat2 P = f->d_backward(f->forward(x)) * J;
            CHECK((P - Mat2::identity()).frob() < 1e-10);
        }
    }
}

TEST_CASE("area preservation") {
    for (auto spec : {"cat", "standard:6.0"}) {
        auto f = make_map(spec);
        for (int i = 0; i < 100; ++i)
            CHECK(std::fabs(std::fabs(f->d_forward(rand_point()).det()) - 1.0) < 1e-12);
    }
    // the perturbation is not symplectic: det = 1 - delta(c_u + c_v) - delta^2 c_u c_v
    auto g = make_map("perturbed_cat:0.05");
    for (int i = 0; i < 100; ++i)
        CHECK(std::fabs(g->d_forward(rand_point()).det() - 1.0) < 2 * 0.05 + 0.05 * 0.05 + 1e-12);
}

TEST_CASE("cocycle chain rule") {
    for (auto spec : {"cat", "perturbed_cat:0.05"}) {
        auto f = make_map(spec);
        for (int i = 0; i < 20; ++i) {
            TorusPoint x = rand_point();
            for (long n : {-10L, -3L, 1L, 7L}) {
                for (long m : {-5L, 2L, 6L}) {
                    Mat2 lhs = cocycle(*f, x, n + m);
                    Mat2 rhs = cocycle(*f, iterate(*f, x, m), n) * cocycle(*f, x, m);
                    CHECK((lhs - rhs).frob() / lhs.frob() < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("stable difference propagators") {
    for (auto spec : {"cat", "perturbed_cat:0.05", "standard:6.0"}) {
        auto f = make_map(spec);
        // agreement with the naive difference at moderate offsets
        for (int i = 0; i < 100; ++i) {
            TorusPoint x = rand_point();
            Vec2 w{1e-4 * (i % 7 - 3), 1e-4 * (i % 5 - 2)};
            Vec2 d = f->forward_diff(x, w);
            Vec2 naive = torus_diff(f->forward(x), f->forward(exp_chart(x, w)));
            CHECK((d - naive).norm() < 1e-12);
            Vec2 db = f->backward_diff(x, w);
            Vec2 naiveb = torus_diff(f->backward(x), f->backward(exp_chart(x, w)));
            CHECK((db - naiveb).norm() < 1e-12);
        }
        // relative accuracy at tiny offsets: compare against the Jacobian
        for (int i = 0; i < 100; ++i) {
            TorusPoint x = rand_point();
            Vec2 w{3e-12, -2e-12};
            Vec2 d = f->forward_diff(x, w);
            Vec2 lin = f->d_forward(x) * w;
            CHECK((d - lin).norm() < 1e-6 * lin.norm());
        }
    }
}

TEST_CASE("dyadic orbits iterate exactly under the cat map") {
    // multiples of 2^-26 stay on the dyadic lattice; forward then backward is
    // bitwise exact for the integer matrix
    auto f = make_map("cat");
    double q = std::pow(2.0, -26);
    TorusPoint x{12345677.0 * q, 7654321.0 * q};
    TorusPoint y = x;
    for (int k = 0; k < 50; ++k) y = f->forward(y);
    for (int k = 0; k < 50; ++k) y = f->backward(y);
    CHECK(y.u == x.u);
    CHECK(y.v == x.v);
}

TEST_CASE("map spec parsing") {
    CHECK_THROWS(make_map("nope"));
    CHECK_THROWS(make_map("cat:1,2,3"));
    CHECK_THROWS(make_map("cat:2,1,1,2"));  // det 3
    CHECK(make_map("cat:1,1,0,1") != nullptr);
    CHECK(make_map("standard:0.0") != nullptr);
}

TEST_CASE("M_f bounds hold on samples") {
    for (auto spec : {"cat", "perturbed_cat:0.05", "standard:6.0"}) {
        auto f = make_map(spec);
        for (int i = 0; i < 200; ++i) {
            TorusPoint x = rand_point();
            CHECK(f->d_forward(x).opnorm() <= f->M_f() * (1.0 + 1e-9));
            CHECK(f->d_backward(x).opnorm() <= f->M_f() * (1.0 + 1e-9));
        }
    }
}
