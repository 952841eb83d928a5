#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torcode/symbolic.hpp"

using namespace torcode;

namespace {
const double CHI = 0.5, EPS = 0.01;

MarkovShift synthetic_shift(const std::vector<std::vector<int>>& succ) {
    MarkovShift sh;
    sh.n_states = int(succ.size());
    sh.succ = succ;
    sh.pred.assign(succ.size(), {});
    for (size_t a = 0; a < succ.size(); ++a)
        for (int b : succ[a]) {
            sh.pred[size_t(b)].push_back(int(a));
            sh.witnesses[{int(a), b}] = {{int(a), b}};
        }
    return sh;
}

struct Setup {
    std::unique_ptr<MapModel> f;
    std::vector<Chain> chains;
    ChartGraph g;
    Cover cov;
    Refinement ref;
    MarkovShift sh;
};

Setup make_period3() {
    Setup s;
    s.f = make_map("cat");
    ToralAutomorphism cat(2, 1, 1, 1);
    TorusPoint seed{0, 0};
    for (auto p : periodic_lattice_points(cat, 3))
        if (torus_dist(p, iterate(cat, p, 1)) > 1e-9) seed = p;
    auto o = sample_orbit(*s.f, seed, 15, 15, CHI, EPS, 64);
    REQUIRE(o.valid);
    s.chains.push_back(orbit_to_chain(o, EPS, -15, 15));
    s.g = build_graph(s.chains, EPS);
    s.cov = build_cover(*s.f, s.chains, s.g, EPS, {});
    s.ref = refine(s.cov);
    s.sh = build_hat_graph(s.cov, s.ref);
    return s;
}
}  // namespace

TEST_CASE("loop counts on the complete graph are k^n") {
    for (int k : {2, 5}) {
        std::vector<std::vector<int>> succ(static_cast<size_t>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) succ[size_t(a)].push_back(b);
        auto sh = synthetic_shift(succ);
        auto counts = count_loops(sh, 10);
        unsigned long long kn = 1;
        for (int n = 1; n <= 10; ++n) {
            kn *= (unsigned long long)k;
            CHECK(counts[size_t(n - 1)] == kn);
        }
        auto fit = gurevich_entropy(counts);
        REQUIRE(fit.ok);
        CHECK(fit.h == doctest::Approx(std::log(double(k))).epsilon(1e-12));
    }
}

TEST_CASE("loop counts on a pure cycle vanish off multiples of the length") {
    auto sh = synthetic_shift({{1}, {2}, {0}});
    auto counts = count_loops(sh, 9);
    for (int n = 1; n <= 9; ++n)
        CHECK(counts[size_t(n - 1)] == (n % 3 == 0 ? 3u : 0u));
    auto fit = gurevich_entropy(counts);
    REQUIRE(fit.ok);  // fits over n = 3, 6, 9 only
    CHECK(std::abs(fit.h) < 1e-12);
    CHECK(fit.n_used == 3);
}

TEST_CASE("golden mean shift entropy approaches log golden ratio") {
    // states 0, 1; forbidden word 11
    auto sh = synthetic_shift({{0, 1}, {0}});
    auto counts = count_loops(sh, 16);
    // tr(A^n) = Lucas numbers: 1, 3, 4, 7, 11, ...
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 3);
    CHECK(counts[2] == 4);
    CHECK(counts[3] == 7);
    CHECK(counts[15] == 2207);
    auto fit = gurevich_entropy(counts);
    double phi = (1 + std::sqrt(5.0)) / 2;
    CHECK(fit.h == doctest::Approx(std::log(phi)).epsilon(1e-2));
}

TEST_CASE("hat graph of the period-3 cover is the 3-cycle with witnesses") {
    auto s = make_period3();
    REQUIRE(s.sh.n_states == 3);
    for (int r = 0; r < 3; ++r) {
        REQUIRE(s.sh.succ[size_t(r)].size() == 1);
        CHECK(s.sh.succ[size_t(r)][0] != r);
        CHECK(s.sh.pred[size_t(r)].size() == 1);
    }
    for (const auto& [e, w] : s.sh.witnesses) {
        REQUIRE(!w.empty());
        // witnesses are genuine sampled class transitions
        for (auto [ca, cb] : w) {
            const auto& cs = s.cov.class_succ[size_t(ca)];
            CHECK(std::find(cs.begin(), cs.end(), cb) != cs.end());
        }
    }
    auto counts = count_loops(s.sh, 9);
    for (int n = 1; n <= 9; ++n)
        CHECK(counts[size_t(n - 1)] == (n % 3 == 0 ? 3u : 0u));
}

TEST_CASE("cylinder points realize admissible words and reject others") {
    auto s = make_period3();
    int r0 = 0, r1 = s.sh.succ[0][0];
    int r2 = s.sh.succ[size_t(r1)][0];
    std::vector<int> word{r0, r1, r2, r0, r1};
    auto cp = cylinder_point(s.cov, s.ref, s.sh, word);
    REQUIRE(cp.ok);
    CHECK(cp.codings.size() == word.size());
    // the realized point lies in the middle rectangle's class
    int mid_cls = s.cov.cls[size_t(cp.codings[2])];
    CHECK(s.ref.rect_of_class[size_t(mid_cls)] == r2);
    CHECK(torus_dist(cp.p, s.cov.rep[size_t(mid_cls)]) < 1e-12);

    std::vector<int> bad{r0, r2};  // skips a cycle step
    CHECK(!cylinder_point(s.cov, s.ref, s.sh, bad).ok);
}

TEST_CASE("periodic points from loops polish to exact periodic orbits") {
    auto s = make_period3();
    auto pps = periodic_points(*s.f, s.cov, s.ref, s.sh, 6);
    // loops of length 3 and 6 through the 3-cycle: one rotation class each
    REQUIRE(pps.size() == 2);
    CHECK(pps[0].period == 3);
    CHECK(pps[1].period == 6);
    for (const auto& pp : pps) {
        CHECK(pp.converged);
        CHECK(pp.residual < 1e-12);
        CHECK(torus_dist(iterate(*s.f, pp.x, pp.period), pp.x) < 1e-12);
    }
}

TEST_CASE("newton polish recovers the orbit from a perturbed seed") {
    auto s = make_period3();
    Cover nudged = s.cov;
    for (auto& r : nudged.rep) r = make_point(r.u + 3e-4, r.v - 2e-4);
    auto pps = periodic_points(*s.f, nudged, s.ref, s.sh, 3);
    REQUIRE(pps.size() == 1);
    CHECK(pps[0].converged);
    CHECK(pps[0].residual < 1e-12);
    CHECK(torus_dist(pps[0].x, s.cov.rep[size_t(s.cov.cls[size_t(0)])]) < 1e-9);
}

TEST_CASE("preimage bound is one for the disjoint period-3 cover") {
    auto s = make_period3();
    auto pb = preimage_bound(s.cov, s.ref, s.sh);
    REQUIRE(pb.affil.size() == 3);
    for (int a : pb.affil) CHECK(a == 1);
    CHECK(pb.bound == 1);
}

TEST_CASE("fiber tangents recover the Oseledets directions") {
    auto s = make_period3();
    for (size_t c = 0; c < s.cov.codings.size(); ++c) {
        auto sf = splitting_from_coding(*s.f, s.cov, int(c), CHI);
        REQUIRE(sf.ok);
        CHECK(sf.err_u < 1e-9);
        CHECK(sf.err_s < 1e-9);
        // unstable and stable lines are transversal
        CHECK(std::abs(sf.e_u.cross(sf.e_s)) > 0.3);
    }
}
