#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "torcode/markov.hpp"

using namespace torcode;

namespace {
const double CHI = 0.5, EPS = 0.01;

TorusPoint period3_seed() {
    ToralAutomorphism cat(2, 1, 1, 1);
    for (auto p : periodic_lattice_points(cat, 3))
        if (torus_dist(p, iterate(cat, p, 1)) > 1e-9) return p;
    return {0, 0};
}

struct Setup {
    std::unique_ptr<MapModel> f;
    std::vector<Chain> chains;
    ChartGraph g;
    Cover cov;
};

Setup make_period3_cover(int n_chains = 1) {
    Setup s;
    s.f = make_map("cat");
    TorusPoint seed = period3_seed();
    for (int c = 0; c < n_chains; ++c) {
        auto o = sample_orbit(*s.f, iterate(*s.f, seed, c), 15, 15, CHI, EPS, 64);
        REQUIRE(o.valid);
        s.chains.push_back(orbit_to_chain(o, EPS, -15, 15));
    }
    s.g = build_graph(s.chains, EPS);
    s.cov = build_cover(*s.f, s.chains, s.g, EPS, {});
    return s;
}
}  // namespace

TEST_CASE("cover of a period-3 orbit: three classes, one per Z-set") {
    auto s = make_period3_cover();
    REQUIRE(s.g.vertices.size() == 3);
    // 31 elements, window 6: codings at indices 6..24
    CHECK(s.cov.codings.size() == 19);
    CHECK(s.cov.n_classes == 3);
    // pi images coincide bitwise with the orbit points (flat seeds, exact orbit)
    for (const auto& cd : s.cov.codings) {
        REQUIRE(cd.sh.ok);
        CHECK(torus_dist(cd.sh.pi, s.chains[0].elems[cd.elem_index].chart.x) < 1e-13);
    }
    // each vertex carries exactly one class
    CHECK(s.cov.Z.size() == 3);
    std::set<int> seen;
    for (const auto& [v, zs] : s.cov.Z) {
        CHECK(zs.size() == 1);
        seen.insert(zs[0]);
    }
    CHECK(seen.size() == 3);
    // sampled class transitions close the 3-cycle
    CHECK(s.cov.transitions.size() == 18);
    for (int c = 0; c < 3; ++c) {
        REQUIRE(s.cov.class_succ[size_t(c)].size() == 1);
        CHECK(s.cov.class_succ[size_t(c)][0] != c);
    }
    int c = 0;
    for (int k = 0; k < 3; ++k) c = s.cov.class_succ[size_t(c)][0];
    CHECK(c == 0);
}

TEST_CASE("duplicate chains merge into the same classes") {
    auto s1 = make_period3_cover(1);
    auto s3 = make_period3_cover(3);  // same orbit entered at 3 phases
    CHECK(s3.cov.codings.size() == 3 * s1.cov.codings.size());
    CHECK(s3.cov.n_classes == 3);
    for (const auto& m : s3.cov.class_members) CHECK(m.size() == 19);
}

TEST_CASE("point_to_fiber separates own class from the others") {
    auto s = make_period3_cover();
    for (int c = 0; c < s.cov.n_classes; ++c) {
        int cd = s.cov.class_members[size_t(c)][0];
        CHECK(point_to_fiber(s.cov, cd, 'u', s.cov.rep[size_t(c)]) < 1e-13);
        CHECK(point_to_fiber(s.cov, cd, 's', s.cov.rep[size_t(c)]) < 1e-13);
        for (int other = 0; other < s.cov.n_classes; ++other) {
            if (other == c) continue;
            CHECK(point_to_fiber(s.cov, cd, 'u', s.cov.rep[size_t(other)]) > 1e-3);
        }
    }
}

TEST_CASE("bracket of codings at a common vertex returns the common point") {
    auto s = make_period3_cover();
    for (const auto& [v, zs] : s.cov.Z) {
        std::vector<int> at_v;
        for (size_t i = 0; i < s.cov.codings.size(); ++i)
            if (s.cov.codings[i].vertex == v) at_v.push_back(int(i));
        REQUIRE(at_v.size() >= 2);
        auto br = bracket(s.cov, at_v[0], at_v[1]);
        REQUIRE(br.ok);
        CHECK(torus_dist(br.p, s.cov.codings[size_t(at_v[0])].sh.pi) < 1e-12);
        // the crossing is transversal at about the chart angle
        CHECK(std::abs(br.angle - br.alpha_chart) < 0.2);
    }
}

TEST_CASE("markov commutation relation holds along sampled transitions") {
    auto s = make_period3_cover();
    auto rep = symbolic_markov_check(*s.f, s.cov, 1e-9);
    CHECK(rep.checked > 0);
    CHECK(rep.failures == 0);
    CHECK(rep.worst_gap < 1e-11);
    CHECK(rep.ok);
}

TEST_CASE("refinement into rectangles covers disjointly") {
    auto s = make_period3_cover();
    auto ref = refine(s.cov);
    CHECK(ref.disjoint_cover);
    CHECK(ref.subordinate);
    // distinct Z membership per class: one rectangle per class
    CHECK(ref.rects.size() == 3);
    for (int c = 0; c < s.cov.n_classes; ++c) {
        int r = ref.rect_of_class[size_t(c)];
        REQUIRE(r >= 0);
        CHECK(ref.rects[size_t(r)].classes.size() == 1);
        CHECK(ref.rects[size_t(r)].in_Z.size() == 1);
    }
}

TEST_CASE("rectangle fibers carry the product structure") {
    auto s = make_period3_cover();
    auto ref = refine(s.cov);
    for (const auto& r : ref.rects) {
        int cls = r.classes[0];
        auto rf = rectangle_fibers(s.cov, ref, r.id, cls);
        REQUIRE(!rf.Wu.empty());
        REQUIRE(!rf.Ws.empty());
        CHECK(std::find(rf.Wu.begin(), rf.Wu.end(), cls) != rf.Wu.end());
        CHECK(std::find(rf.Ws.begin(), rf.Ws.end(), cls) != rf.Ws.end());
        CHECK(rf.bracket_checked > 0);
        CHECK(rf.product_ok);
    }
}
