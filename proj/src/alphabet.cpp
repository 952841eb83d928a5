#include "torcode/alphabet.hpp"

#include <bit>
#include <random>
#include <set>

namespace torcode {

PointData analyze_point(const MapModel& f, TorusPoint x, double chi, double eps, int horizon,
                        double margin) {
    PointData pd;
    pd.x = x;
    pd.frame = estimate_splitting(f, x, horizon, chi, margin);
    if (!pd.frame.accepted) return pd;
    pd.scales = lyapunov_scales(f, pd.frame, chi);
    if (pd.scales.diverged) return pd;
    pd.C = build_C(pd.frame, pd.scales);
    pd.Q = chart_size(pd.C, eps, f.beta());
    pd.ok = true;
    return pd;
}

static OrbitData orbit_from_points(const MapModel& f, const std::vector<TorusPoint>& xs,
                                   long n_neg, long n_pos, double chi, double eps, int horizon) {
    OrbitData o;
    o.n_neg = n_neg;
    o.n_pos = n_pos;
    long L = n_neg + n_pos + 1;
    o.pts.reserve(L);
    for (long i = 0; i < L; ++i) {
        o.pts.push_back(analyze_point(f, xs[size_t(i)], chi, eps, horizon));
        if (!o.pts.back().ok) o.valid = false;
    }
    o.charts.reserve(L);
    for (long i = 0; i < L; ++i) {
        const PointData& p = o.pts[size_t(i)];
        if (p.ok)
            o.charts.push_back(std::make_shared<PesinChart>(
                make_chart(p.x, p.C, p.Q, p.scales, p.frame, p.Q.Q_eps, eps)));
        else
            o.charts.push_back(nullptr);
    }
    return o;
}

OrbitData sample_orbit(const MapModel& f, TorusPoint seed, long n_neg, long n_pos, double chi,
                       double eps, int horizon) {
    std::vector<TorusPoint> xs;
    TorusPoint x = seed;  // seed is the leftmost point x_{-n_neg}
    for (long i = 0; i < n_neg + n_pos + 1; ++i) {
        xs.push_back(x);
        x = f.forward(x);
    }
    return orbit_from_points(f, xs, n_neg, n_pos, chi, eps, horizon);
}

std::vector<TorusPoint> periodic_lattice_points(const ToralAutomorphism& f, int n) {
    // A^n by integer multiplication
    long a = 1, b = 0, c = 0, d = 1;
    for (int k = 0; k < n; ++k) {
        long na = f.ia * a + f.ib * c, nb = f.ia * b + f.ib * d;
        long nc = f.ic * a + f.id * c, nd = f.ic * b + f.id * d;
        a = na; b = nb; c = nc; d = nd;
    }
    long ma = a - 1, mb = b, mc = c, md = d - 1;  // M = A^n - I
    long det = ma * md - mb * mc;
    std::vector<TorusPoint> out;
    if (det == 0) return out;
    long N = std::labs(det), S = det > 0 ? 1 : -1;
    auto mod = [&](long t) { return ((t % N) + N) % N; };
    std::set<std::pair<long, long>> seen;
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) {
            // x = M^{-1} (i,j)^T = adj(M) (i,j)^T / det
            long nu = mod(S * (md * i - mb * j));
            long nv = mod(S * (-mc * i + ma * j));
            if (seen.insert({nu, nv}).second)
                out.push_back({double(nu) / double(N), double(nv) / double(N)});
        }
    return out;
}

std::vector<OrbitData> sample_orbits(const MapModel& f, double chi, double eps, int horizon,
                                     const SampleConfig& cfg) {
    std::vector<OrbitData> orbits;
    std::mt19937_64 rng(cfg.rng_seed);
    const double q = std::pow(2.0, -26);
    std::uniform_int_distribution<long> U(0, (1L << 26) - 1);
    int id = 0;
    for (int i = 0; i < cfg.n_orbits; ++i) {
        TorusPoint seed{U(rng) * q, U(rng) * q};
        auto o = sample_orbit(f, seed, cfg.n_neg, cfg.n_pos, chi, eps, horizon);
        o.id = id++;
        orbits.push_back(std::move(o));
    }
    if (cfg.include_periodic) {
        if (auto* aut = dynamic_cast<const ToralAutomorphism*>(&f)) {
            std::set<std::pair<long, long>> seen;  // dedup across n at 2^40 resolution
            for (int n = 1; n <= cfg.periodic_max_n; ++n) {
                // A^n - I in integers; lattice points have denominator |det|
                long a = 1, b = 0, c = 0, d = 1;
                for (int k = 0; k < n; ++k) {
                    long na = aut->ia * a + aut->ib * c, nb = aut->ia * b + aut->ib * d;
                    long nc = aut->ic * a + aut->id * c, nd = aut->ic * b + aut->id * d;
                    a = na; b = nb; c = nc; d = nd;
                }
                long det = (a - 1) * (d - 1) - b * c;
                if (det == 0) continue;
                long N = std::labs(det);
                auto mod = [&](long t) { return ((t % N) + N) % N; };
                for (TorusPoint p : periodic_lattice_points(*aut, n)) {
                    auto key = std::pair{std::lround(p.u * (1L << 40)),
                                         std::lround(p.v * (1L << 40))};
                    if (!seen.insert(key).second) continue;
                    // generic denominators (e.g. 45 for n = 4 on the cat map) do
                    // not iterate bitwise in doubles, so realize the orbit by
                    // exact integer iteration of the numerators mod N
                    long nu = std::lround(p.u * double(N)), nv = std::lround(p.v * double(N));
                    long s = aut->ia * aut->id - aut->ib * aut->ic;  // +-1
                    for (long k = 0; k < cfg.n_neg; ++k) {  // pull back to the left end
                        long tu = mod(s * (aut->id * nu - aut->ib * nv));
                        long tv = mod(s * (-aut->ic * nu + aut->ia * nv));
                        nu = tu; nv = tv;
                    }
                    std::vector<TorusPoint> xs;
                    for (long k = 0; k <= cfg.n_neg + cfg.periodic_n_pos; ++k) {
                        xs.push_back({double(nu) / double(N), double(nv) / double(N)});
                        long tu = mod(aut->ia * nu + aut->ib * nv);
                        long tv = mod(aut->ic * nu + aut->id * nv);
                        nu = tu; nv = tv;
                    }
                    auto o = orbit_from_points(f, xs, cfg.n_neg, cfg.periodic_n_pos, chi, eps,
                                               horizon);
                    o.id = id++;
                    orbits.push_back(std::move(o));
                }
            }
        }
    }
    return orbits;
}

static std::uint64_t point_key64(int orbit_id, long index) {
    return (std::uint64_t(std::uint32_t(orbit_id)) << 32) ^ std::uint64_t(std::uint32_t(index + (1 << 30)));
}

Alphabet coarse_grain(const std::vector<OrbitData>& orbits, double eps) {
    Alphabet A;
    double rmax = std::exp(eps / 3.0);
    // candidate index: below 1e-12 the net threshold only ever merges charts
    // with bitwise-equal centers, so an exact-bits map suffices; above that
    // (synthetic scales) scan the (k, m) bucket.
    std::unordered_map<std::uint64_t, std::vector<int>> exact;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;
    auto bits_key = [](TorusPoint p) {
        return std::bit_cast<std::uint64_t>(p.u) * 0x9e3779b97f4a7c15ull ^
               std::bit_cast<std::uint64_t>(p.v);
    };
    auto bucket_key = [](int kb, int mb) {
        return (std::uint64_t(std::uint32_t(kb)) << 32) | std::uint32_t(mb);
    };
    for (const auto& o : orbits) {
        for (long k = -o.n_neg; k <= o.n_pos; ++k) {
            const PointData& p = o.at(k);
            if (!p.ok || !o.chart_at(k)) continue;
            // needs orbit context for the i = -1, 0, 1 closeness conditions
            if (k - 1 < -o.n_neg || k + 1 > o.n_pos) continue;
            if (!o.at(k - 1).ok || !o.at(k + 1).ok) continue;
            int kb = int(std::lround(-std::log(p.Q.Q_eps)));
            int mb = kb;  // eta = Q_eps charts: the m-bucket coincides
            double thr = std::exp(-8.0 * (mb + 2));
            const std::vector<int>* cands =
                (thr < 1e-12) ? &exact[bits_key(p.x)] : &buckets[bucket_key(kb, mb)];
            int found = -1;
            for (int e : *cands) {
                auto& ent = A.entries[size_t(e)];
                if (ent.k != kb || ent.m != mb) continue;
                const OrbitData& oe = orbits[size_t(ent.orbit_id)];
                bool close = true;
                for (long i = -1; i <= 1 && close; ++i) {
                    const PointData& a = o.at(k + i);
                    const PointData& b = oe.at(ent.orbit_index + i);
                    if (torus_dist(a.x, b.x) + (a.C.C - b.C.C).frob() >= thr) close = false;
                    double r = a.Q.Q_eps / b.Q.Q_eps;
                    if (r <= 1.0 / rmax || r >= rmax) close = false;
                }
                if (close) {
                    found = e;
                    break;
                }
            }
            if (found >= 0) {
                A.entries[size_t(found)].merged++;
                A.assignment[point_key64(o.id, k)] = found;
            } else {
                AlphabetEntry ent;
                ent.chart = o.chart_at(k);
                ent.k = kb;
                ent.m = mb;
                ent.orbit_id = o.id;
                ent.orbit_index = k;
                int id = int(A.entries.size());
                A.assignment[point_key64(o.id, k)] = id;
                exact[bits_key(p.x)].push_back(id);
                buckets[bucket_key(kb, mb)].push_back(id);
                A.entries.push_back(std::move(ent));
            }
        }
    }
    return A;
}

std::vector<long> subordinate(std::span<const long> Q_ell, bool unstable) {
    size_t L = Q_ell.size();
    std::vector<long> p(L);
    if (L == 0) return p;
    if (unstable) {
        p[0] = Q_ell[0];
        for (size_t k = 1; k < L; ++k) p[k] = std::max(p[k - 1] - 3, Q_ell[k]);
    } else {
        p[L - 1] = Q_ell[L - 1];
        for (size_t k = L - 1; k-- > 0;) p[k] = std::max(p[k + 1] - 3, Q_ell[k]);
    }
    return p;
}

Chain orbit_to_chain(const OrbitData& o, double eps, long from, long to) {
    Chain ch;
    ch.orbit_id = o.id;
    ch.k0 = from;
    if (from < -o.n_neg || to > o.n_pos || from > to) return ch;

    // q_epsilon over the whole available orbit window for edge-stability
    std::vector<double> Q;
    for (long k = -o.n_neg; k <= o.n_pos; ++k) {
        if (!o.at(k).ok) return ch;  // chain requires a fully accepted window
        Q.push_back(o.at(k).Q.Q_eps);
    }
    auto q = q_epsilon(Q, eps);
    LatticeIeps lat{eps};

    std::vector<long> Qell;
    for (long k = -o.n_neg; k <= o.n_pos; ++k) Qell.push_back(o.at(k).Q.ell);
    auto pu = subordinate(Qell, true);
    auto ps = subordinate(Qell, false);

    for (long k = from; k <= to; ++k) {
        size_t i = size_t(k + o.n_neg);
        const PointData& p = o.at(k);
        DoubleChart dc;
        dc.chart = *o.chart_at(k);
        dc.pu_ell = pu[i];
        dc.ps_ell = ps[i];
        dc.p_u = lat.value(dc.pu_ell);
        dc.p_s = lat.value(dc.ps_ell);
        if (k + 1 <= o.n_pos) dc.fwd = o.chart_at(k + 1);
        if (k - 1 >= -o.n_neg) dc.bwd = o.chart_at(k - 1);
        ch.elems.push_back(std::move(dc));
        ch.eta.push_back(lat.floor_value(q[i]));
    }
    return ch;
}

namespace {
struct VertexKey {
    std::uint64_t ub, vb;
    long pu, ps;
    bool operator==(const VertexKey&) const = default;
};
struct VertexKeyHash {
    size_t operator()(const VertexKey& k) const {
        std::uint64_t h = k.ub * 0x9e3779b97f4a7c15ull;
        h ^= k.vb + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= std::uint64_t(k.pu) + (h << 6) + (h >> 2);
        h ^= std::uint64_t(k.ps) + (h << 6) + (h >> 2);
        return size_t(h);
    }
};
}  // namespace

ChartGraph build_graph(const std::vector<Chain>& chains, double eps) {
    ChartGraph g;
    std::unordered_map<VertexKey, int, VertexKeyHash> index;
    auto key_of = [](const DoubleChart& dc) {
        return VertexKey{std::bit_cast<std::uint64_t>(dc.chart.x.u),
                         std::bit_cast<std::uint64_t>(dc.chart.x.v), dc.pu_ell, dc.ps_ell};
    };
    auto vertex_of = [&](const DoubleChart& dc) {
        auto [it, fresh] = index.try_emplace(key_of(dc), int(g.vertices.size()));
        if (fresh) {
            g.vertices.push_back(dc);
            g.succ.emplace_back();
            g.pred.emplace_back();
        } else if (!g.vertices[size_t(it->second)].fwd && dc.fwd) {
            g.vertices[size_t(it->second)] = dc;  // prefer a copy with full context
        }
        return it->second;
    };
    std::set<std::pair<int, int>> edges;
    for (const auto& ch : chains) {
        auto& ids = g.chain_vertex.emplace_back();
        for (const auto& dc : ch.elems) ids.push_back(vertex_of(dc));
        for (size_t i = 0; i + 1 < ch.elems.size(); ++i) {
            if (!edge(ch.elems[i], ch.elems[i + 1], eps).ok) continue;
            auto e = std::pair{ids[i], ids[i + 1]};
            if (edges.insert(e).second) {
                g.succ[size_t(e.first)].push_back(e.second);
                g.pred[size_t(e.second)].push_back(e.first);
            }
        }
    }
    // prune vertices that cannot sit on a bi-infinite path
    std::vector<bool> alive(g.vertices.size(), true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t v = 0; v < g.vertices.size(); ++v) {
            if (!alive[v]) continue;
            auto has_live = [&](const std::vector<int>& nb) {
                for (int w : nb)
                    if (alive[size_t(w)]) return true;
                return false;
            };
            if (!has_live(g.succ[v]) || !has_live(g.pred[v])) {
                alive[v] = false;
                g.n_pruned++;
                changed = true;
            }
        }
    }
    // Tarjan SCC (iterative) over surviving vertices
    int n = int(g.vertices.size());
    g.scc_id.assign(size_t(n), -1);
    std::vector<int> low(size_t(n), 0), num(size_t(n), -1), stk;
    std::vector<bool> onstk(size_t(n), false);
    int counter = 0;
    for (int s = 0; s < n; ++s) {
        if (!alive[size_t(s)] || num[size_t(s)] >= 0) continue;
        struct Frame { int v; size_t ci; };
        std::vector<Frame> call{{s, 0}};
        while (!call.empty()) {
            auto& fr = call.back();
            int v = fr.v;
            if (fr.ci == 0) {
                num[size_t(v)] = low[size_t(v)] = counter++;
                stk.push_back(v);
                onstk[size_t(v)] = true;
            }
            bool descended = false;
            while (fr.ci < g.succ[size_t(v)].size()) {
                int w = g.succ[size_t(v)][fr.ci++];
                if (!alive[size_t(w)]) continue;
                if (num[size_t(w)] < 0) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (onstk[size_t(w)]) low[size_t(v)] = std::min(low[size_t(v)], num[size_t(w)]);
            }
            if (descended) continue;
            if (low[size_t(v)] == num[size_t(v)]) {
                while (true) {
                    int w = stk.back();
                    stk.pop_back();
                    onstk[size_t(w)] = false;
                    g.scc_id[size_t(w)] = g.n_scc;
                    if (w == v) break;
                }
                g.n_scc++;
            }
            call.pop_back();
            if (!call.empty()) {
                int p = call.back().v;
                low[size_t(p)] = std::min(low[size_t(p)], low[size_t(v)]);
            }
        }
    }
    // drop dead vertices' adjacency (ids stay stable; chain_vertex keeps -1 for dead)
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (alive[v]) continue;
        g.succ[v].clear();
        g.pred[v].clear();
        for (auto& ids : g.chain_vertex)
            for (auto& id : ids)
                if (id == int(v)) id = -1;
    }
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        auto filt = [&](std::vector<int>& nb) {
            std::erase_if(nb, [&](int w) { return !alive[size_t(w)]; });
        };
        filt(g.succ[v]);
        filt(g.pred[v]);
    }
    return g;
}

}  // namespace torcode
