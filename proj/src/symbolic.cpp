#include "torcode/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace torcode {

MarkovShift build_hat_graph(const Cover& cov, const Refinement& ref) {
    MarkovShift sh;
    sh.n_states = int(ref.rects.size());
    sh.succ.assign(size_t(sh.n_states), {});
    sh.pred.assign(size_t(sh.n_states), {});
    for (auto [a, b] : cov.transitions) {
        int ca = cov.cls[size_t(a)], cb = cov.cls[size_t(b)];
        int ra = ref.rect_of_class[size_t(ca)], rb = ref.rect_of_class[size_t(cb)];
        if (ra < 0 || rb < 0) continue;
        auto& w = sh.witnesses[{ra, rb}];
        if (w.empty()) {
            sh.succ[size_t(ra)].push_back(rb);
            sh.pred[size_t(rb)].push_back(ra);
        }
        if (std::find(w.begin(), w.end(), std::pair{ca, cb}) == w.end()) w.push_back({ca, cb});
    }
    for (auto& s : sh.succ) std::sort(s.begin(), s.end());
    for (auto& s : sh.pred) std::sort(s.begin(), s.end());
    return sh;
}

CylinderPoint cylinder_point(const Cover& cov, const Refinement& ref, const MarkovShift& sh,
                             std::span<const int> word) {
    CylinderPoint cp;
    if (word.empty()) return cp;
    for (int r : word)
        if (r < 0 || r >= sh.n_states) return cp;

    // coding-level successor lists
    std::vector<std::vector<int>> next(cov.codings.size());
    for (auto [a, b] : cov.transitions) next[size_t(a)].push_back(b);
    auto rect_of = [&](int coding) {
        return ref.rect_of_class[size_t(cov.cls[size_t(coding)])];
    };

    std::vector<int> path;
    auto dfs = [&](auto&& self, int coding, size_t pos) -> bool {
        if (rect_of(coding) != word[pos]) return false;
        path.push_back(coding);
        if (pos + 1 == word.size()) return true;
        for (int nc : next[size_t(coding)])
            if (self(self, nc, pos + 1)) return true;
        path.pop_back();
        return false;
    };
    for (size_t c = 0; c < cov.codings.size(); ++c) {
        if (dfs(dfs, int(c), 0)) break;
    }
    if (path.size() != word.size()) return cp;
    cp.ok = true;
    cp.codings = path;
    cp.p = cov.codings[size_t(path[path.size() / 2])].sh.pi;
    return cp;
}

std::vector<unsigned long long> count_loops(const MarkovShift& sh, int n_max) {
    size_t k = size_t(sh.n_states);
    using u128 = unsigned __int128;
    std::vector<u128> A(k * k, 0), P(k * k, 0), T(k * k, 0);
    for (size_t a = 0; a < k; ++a)
        for (int b : sh.succ[a]) A[a * k + size_t(b)] = 1;
    for (size_t i = 0; i < k * k; ++i) P[i] = A[i];

    std::vector<unsigned long long> counts;
    for (int n = 1; n <= n_max; ++n) {
        u128 tr = 0;
        for (size_t i = 0; i < k; ++i) tr += P[i * k + i];
        if (tr > (u128)~0ULL) throw std::overflow_error("loop count exceeds 64 bits");
        counts.push_back((unsigned long long)tr);
        if (n == n_max) break;
        // P <- P * A
        std::fill(T.begin(), T.end(), u128(0));
        for (size_t i = 0; i < k; ++i)
            for (size_t l = 0; l < k; ++l) {
                if (P[i * k + l] == 0) continue;
                u128 pil = P[i * k + l];
                for (size_t j = 0; j < k; ++j) T[i * k + j] += pil * A[l * k + j];
            }
        std::swap(P, T);
    }
    return counts;
}

EntropyFit gurevich_entropy(std::span<const unsigned long long> counts) {
    EntropyFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        double n = double(i + 1), y = std::log(double(counts[i]));
        sx += n;
        sy += y;
        sxx += n * n;
        sxy += n * y;
        fit.n_used++;
    }
    if (fit.n_used < 2) return fit;
    double denom = fit.n_used * sxx - sx * sx;
    fit.h = (fit.n_used * sxy - sx * sy) / denom;
    fit.ok = true;
    return fit;
}

namespace {
// canonical rotation of a cyclic word, for dedup
std::vector<int> canonical(std::vector<int> w) {
    std::vector<int> best = w;
    for (size_t r = 1; r < w.size(); ++r) {
        std::rotate(w.begin(), w.begin() + 1, w.end());
        if (w < best) best = w;
    }
    return best;
}
}  // namespace

std::vector<PeriodicPoint> periodic_points(const MapModel& f, const Cover& cov,
                                           const Refinement& ref, const MarkovShift& sh,
                                           int n_max, double tol, int max_iters) {
    std::vector<PeriodicPoint> out;
    std::set<std::vector<int>> seen;

    // enumerate loops up to n_max by DFS (small alphabets only)
    std::vector<int> word;
    auto newton = [&](TorusPoint x0, long n) {
        PeriodicPoint pp;
        pp.period = int(n);
        pp.x = x0;
        double res = torus_diff(iterate(f, pp.x, n), pp.x).norm();
        for (int it = 0; it < max_iters && res > 1e-14; ++it) {
            Mat2 J = cocycle(f, pp.x, n) - Mat2::identity();
            if (std::abs(J.det()) < 1e-12) break;
            Vec2 r = torus_diff(pp.x, iterate(f, pp.x, n));  // f^n(x) - x
            Vec2 dx = J.inverse() * r;
            double damp = 1.0;
            for (int h = 0; h < 20; ++h) {
                TorusPoint cand = make_point(pp.x.u - damp * dx.x, pp.x.v - damp * dx.y);
                double cres = torus_diff(iterate(f, cand, n), cand).norm();
                if (cres < res) {
                    pp.x = cand;
                    res = cres;
                    break;
                }
                damp *= 0.5;
            }
        }
        pp.residual = res;
        pp.converged = res < tol;
        return pp;
    };

    // loops rooted at their smallest state, deduped up to rotation
    for (int s = 0; s < sh.n_states; ++s) {
        word.assign(1, s);
        auto walk = [&](auto&& self, int cur) -> void {
            for (int nx : sh.succ[size_t(cur)]) {
                if (nx < s) continue;
                if (nx == s) {
                    auto canon = canonical(word);
                    if (seen.insert(canon).second) {
                        auto it = sh.witnesses.find({word[0], word.size() > 1 ? word[1] : word[0]});
                        int cls = (it != sh.witnesses.end())
                                      ? it->second[0].first
                                      : ref.rects[size_t(word[0])].classes[0];
                        PeriodicPoint pp = newton(cov.rep[size_t(cls)], long(word.size()));
                        pp.word = word;
                        out.push_back(pp);
                    }
                }
                if (word.size() < size_t(n_max)) {
                    word.push_back(nx);
                    self(self, nx);
                    word.pop_back();
                }
            }
        };
        walk(walk, s);
    }
    std::sort(out.begin(), out.end(),
              [](const PeriodicPoint& a, const PeriodicPoint& b) { return a.period < b.period; });
    return out;
}

PreimageBound preimage_bound(const Cover& cov, const Refinement& ref, const MarkovShift& sh) {
    PreimageBound pb;
    pb.affil.assign(ref.rects.size(), 0);
    // N(R): Z-sets a rectangle meets (some member class belongs to Z(v))
    for (size_t r = 0; r < ref.rects.size(); ++r) {
        int n = 0;
        for (const auto& [v, zs] : cov.Z) {
            bool meets = false;
            for (int c : ref.rects[r].classes)
                if (std::find(zs.begin(), zs.end(), c) != zs.end()) meets = true;
            if (meets) n++;
        }
        pb.affil[r] = n;
    }
    for (const auto& [e, w] : sh.witnesses)
        pb.bound = std::max(pb.bound, pb.affil[size_t(e.first)] * pb.affil[size_t(e.second)]);
    return pb;
}

SplittingFromCoding splitting_from_coding(const MapModel& f, const Cover& cov, int coding,
                                          double chi) {
    SplittingFromCoding sf;
    const Coding& cd = cov.codings[size_t(coding)];
    if (!cd.sh.ok) return sf;
    Vec2 w = cd.sh.pi_chart;
    Vec2 tu = cd.chart.C.C * cd.sh.Vu.tangent(w.y);
    Vec2 ts = cd.chart.C.C * cd.sh.Vs.tangent(w.x);
    sf.e_u = tu.normalized();
    sf.e_s = ts.normalized();
    auto fr = estimate_splitting(f, cd.sh.pi, 32, chi);
    if (!fr.accepted) return sf;
    sf.err_u = std::abs(sf.e_u.cross(fr.e_u));
    sf.err_s = std::abs(sf.e_s.cross(fr.e_s));
    sf.ok = true;
    return sf;
}

}  // namespace torcode
