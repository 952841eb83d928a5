#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "torcode/alphabet.hpp"

using namespace torcode;

namespace {
const double CHI = 0.5, EPS = 0.01;
}

TEST_CASE("orbit sampling is forward-bitwise consistent") {
    auto f = make_map("perturbed_cat:0.05");
    auto o = sample_orbit(*f, {0.371728515625, 0.88037109375}, 5, 5, CHI, EPS, 64);
    REQUIRE(o.valid);
    for (long k = -5; k < 5; ++k) {
        TorusPoint img = f->forward(o.at(k).x);
        CHECK(img.u == o.at(k + 1).x.u);
        CHECK(img.v == o.at(k + 1).x.v);
    }
}

TEST_CASE("periodic lattice points are exactly periodic") {
    ToralAutomorphism cat(2, 1, 1, 1);
    // tr(A^n) - 2 counts fixed points of f^n: 1, 5, 16, 45, 121
    std::vector<size_t> expect{1, 5, 16, 45, 121};
    for (int n = 1; n <= 5; ++n) {
        auto pts = periodic_lattice_points(cat, n);
        CHECK(pts.size() == expect[size_t(n - 1)]);
        for (auto p : pts) CHECK(torus_dist(iterate(cat, p, n), p) < 1e-12);
    }
    // n = 3: det(A^3 - I) = 16, dyadic denominators iterate bitwise exactly
    for (auto p : periodic_lattice_points(cat, 3)) {
        TorusPoint q = iterate(cat, p, 3);
        CHECK(q.u == p.u);
        CHECK(q.v == p.v);
    }
}

TEST_CASE("sample_orbits includes periodic seeds for automorphisms") {
    auto f = make_map("cat");
    SampleConfig cfg;
    cfg.n_orbits = 5;
    cfg.n_neg = 3;
    cfg.n_pos = 3;
    cfg.periodic_max_n = 3;
    cfg.periodic_n_pos = 8;
    auto orbits = sample_orbits(*f, CHI, EPS, 64, cfg);
    // 5 random + distinct periodic points of periods 1..3: 1 + 4 + 15 = 20
    CHECK(orbits.size() == 25);
    for (const auto& o : orbits) CHECK(o.valid);
    // determinism
    auto orbits2 = sample_orbits(*f, CHI, EPS, 64, cfg);
    CHECK(orbits2.size() == orbits.size());
    for (size_t i = 0; i < orbits.size(); ++i)
        CHECK(orbits[i].at(0).x.u == orbits2[i].at(0).x.u);
}

TEST_CASE("coarse grain merges only bitwise-identical centers at real scale") {
    auto f = make_map("cat");
    SampleConfig cfg;
    cfg.n_orbits = 4;
    cfg.n_neg = 4;
    cfg.n_pos = 4;
    cfg.include_periodic = false;
    auto orbits = sample_orbits(*f, CHI, EPS, 64, cfg);
    // duplicate one orbit: all its interior charts must merge into the first copy
    auto dup = orbits[0];
    dup.id = int(orbits.size());
    orbits.push_back(dup);
    auto A = coarse_grain(orbits, EPS);
    size_t interior = 7;  // per orbit: k in [-3, 3]
    CHECK(A.entries.size() == 4 * interior);
    int merged_total = 0;
    for (const auto& e : A.entries) merged_total += e.merged;
    CHECK(size_t(merged_total) == 5 * interior);
    // every interior point got an assignment
    CHECK(A.assignment.size() == 5 * interior);
}

TEST_CASE("subordination recursion and the hand-unrolled dip") {
    // Q lattice indices with a dip at position 3; eps lattice: e^eps = 3 steps
    std::vector<long> Q{100, 100, 100, 130, 100, 100, 100};
    auto pu = subordinate(Q, true);
    // left of the dip unaffected; at the dip p = Q; decays by 3 per step after
    CHECK(pu[2] == 100);
    CHECK(pu[3] == 130);
    CHECK(pu[4] == 127);
    CHECK(pu[5] == 124);
    CHECK(pu[6] == 121);
    auto ps = subordinate(Q, false);
    CHECK(ps[4] == 100);
    CHECK(ps[3] == 130);
    CHECK(ps[2] == 127);
    CHECK(ps[0] == 121);
    // p is subordinate: p(k) <= e^{eps n} Q(k-n) for all n >= 0 within window
    for (size_t k = 0; k < Q.size(); ++k)
        for (size_t n = 0; n <= k; ++n) CHECK(pu[k] >= Q[k - n] - 3 * long(n));
}

TEST_CASE("chains satisfy the admissibility inequalities") {
    auto f = make_map("cat");
    auto o = sample_orbit(*f, {0.25, 0.125}, 10, 10, CHI, EPS, 64);
    REQUIRE(o.valid);
    auto ch = orbit_to_chain(o, EPS, -8, 8);
    REQUIRE(ch.elems.size() == 17);
    for (size_t i = 0; i < ch.elems.size(); ++i) {
        const auto& dc = ch.elems[i];
        CHECK(dc.p_u <= dc.chart.Q_eps * (1 + 1e-12));
        CHECK(dc.p_s <= dc.chart.Q_eps * (1 + 1e-12));
        // eta_n <= eps Q and the double chart dominates eta
        CHECK(ch.eta[i] <= EPS * dc.chart.Q_eps);
        CHECK(ch.eta[i] <= dc.p_min());
        if (i > 0) {
            double r = ch.eta[i] / ch.eta[i - 1];
            CHECK(r >= std::exp(-EPS) - 1e-12);
            CHECK(r <= std::exp(EPS) + 1e-12);
        }
    }
    // cat map: Q constant, so the chain is saturated at Q
    for (const auto& dc : ch.elems) CHECK(dc.pu_ell == dc.chart.Q_ell);
}

TEST_CASE("chart graph: vertices dedup, edges verified, pruning") {
    auto f = make_map("cat");
    // a dyadic period-3 orbit revisits the same bits: its chain wraps onto
    // 3 vertices and every edge closes a loop
    ToralAutomorphism cat(2, 1, 1, 1);
    auto per3 = periodic_lattice_points(cat, 3);
    TorusPoint seed{0, 0};
    for (auto p : per3)
        if (torus_dist(p, iterate(cat, p, 1)) > 1e-9) seed = p;  // genuine period 3
    auto o = sample_orbit(*f, seed, 9, 9, CHI, EPS, 64);
    REQUIRE(o.valid);
    auto ch = orbit_to_chain(o, EPS, -9, 9);
    auto g = build_graph({ch}, EPS);
    CHECK(g.vertices.size() == 3);
    CHECK(g.n_scc == 1);
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        CHECK(g.succ[v].size() == 1);
        CHECK(g.pred[v].size() == 1);
    }

    // a non-recurrent random orbit prunes away entirely
    auto o2 = sample_orbit(*f, {0.3714599609375, 0.1402587890625}, 5, 5, CHI, EPS, 64);
    REQUIRE(o2.valid);
    auto ch2 = orbit_to_chain(o2, EPS, -5, 5);
    auto g2 = build_graph({ch2}, EPS);
    size_t live = 0;
    for (size_t v = 0; v < g2.vertices.size(); ++v)
        if (!g2.succ[v].empty() || !g2.pred[v].empty()) live++;
    CHECK(live == 0);
    CHECK(g2.n_pruned == int(g2.vertices.size()));
}
