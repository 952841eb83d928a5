#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torcode/reduction.hpp"

using namespace torcode;

namespace {
const double SQ5 = std::sqrt(5.0);
const double LAM = (3.0 - SQ5) / 2.0;  // contracting eigenvalue of [[2,1],[1,1]]
const double MU = (3.0 + SQ5) / 2.0;
const double CHI = 0.5, EPS = 0.01;

std::mt19937_64 rng(999);
TorusPoint rand_point() {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    return {U(rng), U(rng)};
}
}  // namespace

TEST_CASE("splitting of the cat map matches the eigenframe") {
    auto f = make_map("cat");
    // analytic eigenvectors: e_u || (1, mu-2), e_s || (1, lam-2)
    Vec2 vu = Vec2{1.0, MU - 2.0}.normalized();
    Vec2 vs = Vec2{1.0, LAM - 2.0}.normalized();
    for (int i = 0; i < 50; ++i) {
        auto fr = estimate_splitting(*f, rand_point(), 64, CHI);
        CHECK(fr.accepted);
        CHECK(std::fabs(std::fabs(fr.e_u.dot(vu)) - 1.0) < 1e-12);
        CHECK(std::fabs(std::fabs(fr.e_s.dot(vs)) - 1.0) < 1e-12);
        // A is symmetric, so the splitting is orthogonal
        CHECK(fr.sin_alpha == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fr.lam_hat == doctest::Approx(std::log(LAM)).epsilon(1e-10));
        CHECK(fr.mu_hat == doctest::Approx(std::log(MU)).epsilon(1e-10));
        // orientation conventions
        CHECK(fr.e_s.y >= 0.0);
        CHECK(fr.e_s.cross(fr.e_u) > 0.0);
    }
}

TEST_CASE("parabolic map is rejected") {
    auto f = make_map("cat:1,1,0,1");
    auto fr = estimate_splitting(*f, {0.3, 0.4}, 64, CHI);
    CHECK(!fr.accepted);
}

TEST_CASE("s_chi matches the closed form") {
    auto f = make_map("cat");
    // sum_k e^{2k chi} lam^{2k} is geometric: s = sqrt(2/(1 - e^{2chi} lam^2))
    double s_exact = std::sqrt(2.0 / (1.0 - std::exp(2.0 * CHI) * LAM * LAM));
    auto fr = estimate_splitting(*f, {0.2, 0.6}, 64, CHI);
    auto sc = lyapunov_scales(*f, fr, CHI);
    CHECK(!sc.diverged);
    CHECK(sc.s_chi == doctest::Approx(s_exact).epsilon(1e-8));
    // 1/mu = lam, so the u-series coincides
    CHECK(sc.u_chi == doctest::Approx(s_exact).epsilon(1e-8));
    CHECK(sc.s_chi == doctest::Approx(1.8206).epsilon(1e-4));
    CHECK(sc.s_chi >= std::numbers::sqrt2);
}

TEST_CASE("series diverges when chi is too large") {
    auto f = make_map("cat");
    auto fr = estimate_splitting(*f, {0.2, 0.6}, 64, CHI);
    auto sc = lyapunov_scales(*f, fr, 1.1 * std::log(MU), 1e-10, 500);
    CHECK(sc.diverged);
}

TEST_CASE("build_C diagonalizes the cocycle") {
    auto f = make_map("cat");
    TorusPoint x = rand_point();
    auto fr = estimate_splitting(*f, x, 64, CHI);
    auto sc = lyapunov_scales(*f, fr, CHI);
    auto C = build_C(fr, sc);
    CHECK((C.C * C.C_inv - Mat2::identity()).frob() < 1e-12);
    CHECK(C.C.det() > 0.0);
    // ||C^{-1}||_F = sqrt(s^2 + u^2)/|sin alpha|, algebraic identity
    double frob_exact = std::sqrt(sc.s_chi * sc.s_chi + sc.u_chi * sc.u_chi) /
                        std::fabs(std::sin(fr.alpha));
    CHECK(C.frob_inv == doctest::Approx(frob_exact).epsilon(1e-12));
    CHECK(C.frob_inv == doctest::Approx(2.5747).epsilon(1e-4));
    CHECK(C.op_inv <= C.frob_inv + 1e-15);

    TorusPoint fx = f->forward(x);
    auto fr2 = estimate_splitting(*f, fx, 64, CHI);
    auto sc2 = lyapunov_scales(*f, fr2, CHI);
    auto C2 = build_C(fr2, sc2);
    auto rr = reduce(*f, x, C, C2);
    CHECK(std::fabs(rr.lambda_chi) == doctest::Approx(LAM).epsilon(1e-10));
    CHECK(std::fabs(rr.mu_chi) == doctest::Approx(MU).epsilon(1e-10));
    CHECK(rr.off_diag < 1e-9);
    // exponent bracket: C_f^{-1} < |lam_chi| < e^{-chi} < e^{chi} < |mu_chi| < C_f
    double Cf = C_f_bound(f->M_f());
    CHECK(Cf == doctest::Approx(47.09).epsilon(1e-3));
    CHECK(std::fabs(rr.lambda_chi) > 1.0 / Cf);
    CHECK(std::fabs(rr.lambda_chi) < std::exp(-CHI));
    CHECK(std::fabs(rr.mu_chi) > std::exp(CHI));
    CHECK(std::fabs(rr.mu_chi) < Cf);
}

TEST_CASE("reduction brackets hold for the perturbed map") {
    auto f = make_map("perturbed_cat:0.05");
    double Cf = C_f_bound(f->M_f());
    for (int i = 0; i < 25; ++i) {
        TorusPoint x = rand_point();
        auto fr = estimate_splitting(*f, x, 64, CHI);
        REQUIRE(fr.accepted);
        auto sc = lyapunov_scales(*f, fr, CHI);
        REQUIRE(!sc.diverged);
        auto C = build_C(fr, sc);
        TorusPoint fx = f->forward(x);
        auto fr2 = estimate_splitting(*f, fx, 64, CHI);
        auto sc2 = lyapunov_scales(*f, fr2, CHI);
        auto C2 = build_C(fr2, sc2);
        auto rr = reduce(*f, x, C, C2);
        CHECK(rr.off_diag < 1e-9);
        CHECK(std::fabs(rr.lambda_chi) > 1.0 / Cf);
        CHECK(std::fabs(rr.lambda_chi) < std::exp(-CHI));
        CHECK(std::fabs(rr.mu_chi) > std::exp(CHI));
        CHECK(std::fabs(rr.mu_chi) < Cf);
        // recursion s_chi(x)^2 = 2 + e^{2chi} |df_x e_s(x)|^2 s_chi(f x)^2
        double dfe = (f->d_forward(x) * fr.e_s).norm();
        double rhs = 2.0 + std::exp(2.0 * CHI) * dfe * dfe * sc2.s_chi * sc2.s_chi;
        CHECK(sc.s_chi * sc.s_chi == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("I_eps lattice and chart size") {
    LatticeIeps lat{EPS};
    CHECK(lat.value(0) == 1.0);
    CHECK(lat.index_floor(1.0) == 0);
    // floor returns a lattice value <= q, one step below q * e^{eps/3}
    for (double q : {0.9, 0.5, 1e-3, 1.1786e-11}) {
        long l = lat.index_floor(q);
        CHECK(lat.value(l) <= q * (1 + 1e-12));
        CHECK(lat.value(l) > q * std::exp(-EPS / 3.0) * (1 - 1e-12));
    }

    auto f = make_map("cat");
    auto fr = estimate_splitting(*f, {0.1, 0.7}, 64, CHI);
    auto sc = lyapunov_scales(*f, fr, CHI);
    auto C = build_C(fr, sc);
    auto Q = chart_size(C, EPS, f->beta());
    // frozen oracle: eps^3 * (sqrt(2) s)^{-12}
    double s_exact = std::sqrt(2.0 / (1.0 - std::exp(2.0 * CHI) * LAM * LAM));
    double Qt = std::pow(EPS, 3.0) * std::pow(std::numbers::sqrt2 * s_exact, -12.0);
    CHECK(Q.Q_tilde == doctest::Approx(Qt).epsilon(1e-8));
    CHECK(Q.Q_tilde == doctest::Approx(1.1786e-11).epsilon(1e-3));
    CHECK(Q.ell == 7550);
    CHECK(Q.Q_eps <= Q.Q_tilde);
    CHECK(Q.Q_eps > Q.Q_tilde * std::exp(-EPS / 3.0));
}

TEST_CASE("q_epsilon: window sums") {
    // constant Q: q/Q -> eps (1-r)/(1+r), r = e^{-eps/3}
    size_t L = 4001;
    std::vector<double> Q(L, 3e-11);
    auto q = q_epsilon(Q, EPS);
    double r = std::exp(-EPS / 3.0);
    double expect = EPS * (1.0 - r) / (1.0 + r) * 3e-11;
    CHECK(q[L / 2] == doctest::Approx(expect).epsilon(1e-6));
    for (size_t n = 0; n < L; ++n) CHECK(q[n] < EPS * Q[n]);
    for (size_t n = 0; n + 1 < L; ++n) {
        double ratio = q[n + 1] / q[n];
        CHECK(ratio >= std::exp(-EPS / 3.0) - 1e-12);
        CHECK(ratio <= std::exp(EPS / 3.0) + 1e-12);
    }
    // varying Q keeps the ratio property (exact for any window)
    std::vector<double> Qv(L);
    for (size_t n = 0; n < L; ++n) Qv[n] = 1e-11 * (1.5 + std::sin(0.1 * n));
    auto qv = q_epsilon(Qv, EPS);
    for (size_t n = 0; n + 1 < L; ++n) {
        double ratio = qv[n + 1] / qv[n];
        CHECK(ratio >= std::exp(-EPS / 3.0) - 1e-12);
        CHECK(ratio <= std::exp(EPS / 3.0) + 1e-12);
        CHECK(qv[n] < EPS * Qv[n]);
    }
}
