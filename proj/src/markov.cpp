#include "torcode/markov.hpp"

#include <algorithm>
#include <unordered_map>

namespace torcode {

namespace {
struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(size_t n) : p(n) {
        for (size_t i = 0; i < n; ++i) p[i] = int(i);
    }
    int find(int a) {
        while (p[size_t(a)] != a) a = p[size_t(a)] = p[size_t(p[size_t(a)])];
        return a;
    }
    void unite(int a, int b) { p[size_t(find(a))] = find(b); }
};
}  // namespace

Cover build_cover(const MapModel& f, const std::vector<Chain>& chains, const ChartGraph& g,
                  double eps, const CoverConfig& cfg) {
    (void)eps;
    Cover cov;
    cov.graph = &g;
    cov.cfg = cfg;
    long w = long(cfg.window);

    // one coding per chain element with enough window margin and a live vertex
    for (size_t ci = 0; ci < chains.size(); ++ci) {
        const Chain& ch = chains[ci];
        const auto& vids = g.chain_vertex[ci];
        std::vector<int> coding_at(ch.elems.size(), -1);
        for (size_t i = 0; i < ch.elems.size(); ++i) {
            if (long(i) - w < 0 || i + size_t(w) >= ch.elems.size()) continue;
            if (vids[i] < 0) continue;
            Chain sub;
            sub.orbit_id = ch.orbit_id;
            sub.elems.assign(ch.elems.begin() + long(i) - w, ch.elems.begin() + long(i) + w + 1);
            auto sh = shadow(f, sub, size_t(w), cfg.seed_u, cfg.seed_s, false);
            if (!sh.ok) continue;
            Coding cd;
            cd.chain_id = int(ci);
            cd.elem_index = i;
            cd.vertex = vids[i];
            cd.chart = ch.elems[i].chart;
            cd.sh = std::move(sh);
            coding_at[i] = int(cov.codings.size());
            cov.codings.push_back(std::move(cd));
        }
        for (size_t i = 0; i + 1 < ch.elems.size(); ++i)
            if (coding_at[i] >= 0 && coding_at[i + 1] >= 0)
                cov.transitions.push_back({coding_at[i], coding_at[i + 1]});
    }

    // cluster pi images: union-find over grid cells + 3x3 neighbourhood, so a
    // pair straddling a cell boundary still merges
    size_t n = cov.codings.size();
    UnionFind uf(n);
    double res = cfg.identity_resolution;
    long cells = std::lround(1.0 / res);
    auto cell_of = [&](TorusPoint p) {
        long cu = long(p.u * cells) % cells, cv = long(p.v * cells) % cells;
        return std::pair{cu, cv};
    };
    std::unordered_map<long long, std::vector<int>> grid;
    auto key = [&](long cu, long cv) { return (long long)cu * (cells + 1) + cv; };
    for (size_t i = 0; i < n; ++i) {
        auto [cu, cv] = cell_of(cov.codings[i].sh.pi);
        for (long du = -1; du <= 1; ++du)
            for (long dv = -1; dv <= 1; ++dv) {
                long nu = ((cu + du) % cells + cells) % cells;
                long nv = ((cv + dv) % cells + cells) % cells;
                auto it = grid.find(key(nu, nv));
                if (it == grid.end()) continue;
                for (int j : it->second)
                    if (torus_dist(cov.codings[i].sh.pi, cov.codings[size_t(j)].sh.pi) < res)
                        uf.unite(int(i), j);
            }
        grid[key(cu, cv)].push_back(int(i));
    }
    cov.cls.assign(n, -1);
    std::unordered_map<int, int> root_to_class;
    for (size_t i = 0; i < n; ++i) {
        int r = uf.find(int(i));
        auto [it, fresh] = root_to_class.try_emplace(r, cov.n_classes);
        if (fresh) {
            cov.n_classes++;
            cov.rep.push_back(cov.codings[i].sh.pi);
            cov.class_members.emplace_back();
        }
        cov.cls[i] = it->second;
        cov.class_members[size_t(it->second)].push_back(int(i));
    }

    for (size_t i = 0; i < n; ++i) {
        auto& zs = cov.Z[cov.codings[i].vertex];
        if (std::find(zs.begin(), zs.end(), cov.cls[i]) == zs.end()) zs.push_back(cov.cls[i]);
    }
    for (auto& [v, zs] : cov.Z) std::sort(zs.begin(), zs.end());

    cov.class_succ.assign(size_t(cov.n_classes), {});
    for (auto [a, b] : cov.transitions) {
        auto& s = cov.class_succ[size_t(cov.cls[size_t(a)])];
        int cb = cov.cls[size_t(b)];
        if (std::find(s.begin(), s.end(), cb) == s.end()) s.push_back(cb);
    }
    return cov;
}

double point_to_fiber(const Cover& cov, int coding, char kind, TorusPoint p) {
    const Coding& cd = cov.codings[size_t(coding)];
    const RepresentedCurve& c = (kind == 'u') ? cd.sh.Vu : cd.sh.Vs;
    Vec2 w = cd.chart.to_chart(p);
    double t = (kind == 'u') ? w.y : w.x;
    t = std::clamp(t, -c.q, c.q);
    Vec2 d = w - c.point(t);
    return (cd.chart.C.C * d).norm();
}

Fiber fiber_of(const Cover& cov, int cls_id, int vertex, char kind) {
    Fiber fb;
    for (int cid : cov.class_members[size_t(cls_id)]) {
        if (cov.codings[size_t(cid)].vertex != vertex) continue;
        fb.coding = cid;
        fb.curve = (kind == 'u') ? &cov.codings[size_t(cid)].sh.Vu : &cov.codings[size_t(cid)].sh.Vs;
        break;
    }
    if (fb.coding < 0) return fb;
    auto it = cov.Z.find(vertex);
    if (it == cov.Z.end()) return fb;
    for (int c : it->second) {
        double d = point_to_fiber(cov, fb.coding, kind, cov.rep[size_t(c)]);
        if (d < cov.cfg.membership_resolution) fb.on_fiber.push_back(c);
    }
    return fb;
}

IntersectResult bracket(const Cover& cov, int coding_a, int coding_b) {
    const Coding& a = cov.codings[size_t(coding_a)];
    const Coding& b = cov.codings[size_t(coding_b)];
    return intersect(a.chart, a.sh.Vu, b.sh.Vs);
}

MarkovCheckReport symbolic_markov_check(const MapModel& f, const Cover& cov, double tol) {
    MarkovCheckReport rep;
    // index transitions by source coding
    std::unordered_map<int, int> next;
    for (auto [a, b] : cov.transitions) next[a] = b;
    // group codings by vertex
    std::unordered_map<int, std::vector<int>> by_vertex;
    for (size_t i = 0; i < cov.codings.size(); ++i)
        by_vertex[cov.codings[i].vertex].push_back(int(i));

    for (auto& [v, ids] : by_vertex) {
        for (size_t i = 0; i < ids.size(); ++i)
            for (size_t j = 0; j < ids.size(); ++j) {
                int a = ids[i], b = ids[j];
                auto ia = next.find(a), ib = next.find(b);
                if (ia == next.end() || ib == next.end()) continue;
                int a2 = ia->second, b2 = ib->second;
                if (cov.codings[size_t(a2)].vertex != cov.codings[size_t(b2)].vertex) continue;
                auto br = bracket(cov, a, b);
                auto br2 = bracket(cov, a2, b2);
                if (!br.ok || !br2.ok) continue;
                double gap = torus_dist(f.forward(br.p), br2.p);
                rep.checked++;
                rep.worst_gap = std::max(rep.worst_gap, gap);
                if (gap >= tol) rep.failures++;
                if (rep.checked >= 5000) break;
            }
    }
    rep.ok = rep.checked > 0 && rep.failures == 0;
    return rep;
}

Refinement refine(const Cover& cov) {
    Refinement ref;
    int n = cov.n_classes;
    ref.rect_of_class.assign(size_t(n), -1);

    // membership structure of each class: which Z-sets contain it, which
    // Z-sets its u/s fibers reach
    std::vector<std::vector<int>> in_Z(static_cast<size_t>(n));
    for (auto& [v, zs] : cov.Z)
        for (int c : zs) in_Z[size_t(c)].push_back(v);

    std::vector<std::vector<long long>> profile(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) {
        auto& pr = profile[size_t(c)];
        for (int v : in_Z[size_t(c)]) {
            pr.push_back(1000000007LL * v + 1);
            for (char kind : {'u', 's'}) {
                Fiber fb = fiber_of(cov, c, v, kind);
                for (int other : fb.on_fiber)
                    if (other != c)
                        pr.push_back(1000000007LL * v * (kind == 'u' ? 2 : 3) + 7LL * other);
            }
        }
        std::sort(pr.begin(), pr.end());
    }
    std::map<std::vector<long long>, int> seen;
    for (int c = 0; c < n; ++c) {
        auto [it, fresh] = seen.try_emplace(profile[size_t(c)], int(ref.rects.size()));
        if (fresh) {
            Rectangle r;
            r.id = it->second;
            ref.rects.push_back(r);
        }
        ref.rects[size_t(it->second)].classes.push_back(c);
        ref.rect_of_class[size_t(c)] = it->second;
    }
    // same profile means same in_Z list; record it and verify subordination
    for (auto& r : ref.rects) {
        r.in_Z = in_Z[size_t(r.classes[0])];
        if (r.in_Z.empty()) ref.subordinate = false;
    }
    for (int c = 0; c < n; ++c)
        if (ref.rect_of_class[size_t(c)] < 0) ref.disjoint_cover = false;
    return ref;
}

RectangleFibers rectangle_fibers(const Cover& cov, const Refinement& ref, int rect_id,
                                 int cls_id) {
    RectangleFibers rf;
    const Rectangle& R = ref.rects[size_t(rect_id)];
    // fibers measured inside the first common Z-set
    if (R.in_Z.empty()) return rf;
    int v = R.in_Z[0];
    Fiber fu = fiber_of(cov, cls_id, v, 'u');
    Fiber fs = fiber_of(cov, cls_id, v, 's');
    auto member = [&](int c) {
        return std::find(R.classes.begin(), R.classes.end(), c) != R.classes.end();
    };
    for (int c : fu.on_fiber)
        if (member(c)) rf.Wu.push_back(c);
    for (int c : fs.on_fiber)
        if (member(c)) rf.Ws.push_back(c);
    // product structure: brackets of rectangle members stay in the rectangle
    for (int cu : R.classes)
        for (int cs : R.classes) {
            Fiber a = fiber_of(cov, cu, v, 'u');
            Fiber b = fiber_of(cov, cs, v, 's');
            if (a.coding < 0 || b.coding < 0) continue;
            auto br = bracket(cov, a.coding, b.coding);
            if (!br.ok) continue;
            rf.bracket_checked++;
            // nearest class must belong to the rectangle
            double best = 1e9;
            int best_c = -1;
            for (int c : R.classes) {
                double d = torus_dist(br.p, cov.rep[size_t(c)]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            if (best_c < 0 || best > cov.cfg.membership_resolution || !member(best_c))
                rf.product_ok = false;
            if (rf.bracket_checked > 400) break;
        }
    return rf;
}

}  // namespace torcode
