#include "torcode/manifolds.hpp"

#include <cmath>

namespace torcode {

double RepresentedCurve::eval(double t) const {
    size_t n = ts.size();
    if (t <= ts.front()) return F.front() + Fp.front() * (t - ts.front());
    if (t >= ts.back()) return F.back() + Fp.back() * (t - ts.back());
    double h = ts[1] - ts[0];
    size_t i = std::min(size_t((t - ts[0]) / h), n - 2);
    double s = (t - ts[i]) / h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * F[i] + (s3 - 2 * s2 + s) * h * Fp[i] +
           (-2 * s3 + 3 * s2) * F[i + 1] + (s3 - s2) * h * Fp[i + 1];
}

double RepresentedCurve::eval_deriv(double t) const {
    size_t n = ts.size();
    if (t <= ts.front()) return Fp.front();
    if (t >= ts.back()) return Fp.back();
    double h = ts[1] - ts[0];
    size_t i = std::min(size_t((t - ts[0]) / h), n - 2);
    double s = (t - ts[i]) / h;
    double s2 = s * s;
    return ((6 * s2 - 6 * s) * F[i] + (3 * s2 - 4 * s + 1) * h * Fp[i] +
            (-6 * s2 + 6 * s) * F[i + 1] + (3 * s2 - 2 * s) * h * Fp[i + 1]) /
           h;
}

RepresentedCurve flat_curve(char kind, double q, double value, int grid) {
    RepresentedCurve c;
    c.kind = kind;
    c.q = q;
    c.ts.resize(size_t(grid));
    c.F.assign(size_t(grid), value);
    c.Fp.assign(size_t(grid), 0.0);
    for (int i = 0; i < grid; ++i) c.ts[size_t(i)] = -q + 2.0 * q * i / (grid - 1);
    c.phi = std::fabs(value);
    return c;
}

void recompute_params(RepresentedCurve& c, double beta) {
    size_t n = c.ts.size();
    double m = 0.0, hq = 0.0;
    for (size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(c.Fp[i]));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double d = std::pow(c.ts[j] - c.ts[i], beta / 3.0);
            hq = std::max(hq, std::fabs(c.Fp[j] - c.Fp[i]) / d);
        }
    c.sigma = m + hq;
    size_t mid = n / 2;  // grid is odd, center node at t = 0
    c.gamma = std::fabs(c.Fp[mid]);
    c.phi = std::fabs(c.F[mid]);
}

AdmissibilityReport admissible(const RepresentedCurve& c, const DoubleChart& dc, double eps,
                               double beta) {
    AdmissibilityReport r;
    double pm = dc.p_min();
    r.sigma = c.sigma;
    r.gamma = c.gamma;
    r.gamma_budget = 0.5 * std::pow(pm, beta / 3.0);
    r.phi = c.phi;
    r.phi_budget = 1e-3 * pm;
    double sup = 0.0, lip = 0.0;
    for (size_t i = 0; i < c.ts.size(); ++i) {
        sup = std::max(sup, std::fabs(c.F[i]));
        lip = std::max(lip, std::fabs(c.Fp[i]));
    }
    r.sup = sup;
    r.sup_budget = 1e-2 * dc.chart.Q_eps;
    r.lip = lip;
    r.lip_budget = eps;
    r.ok = r.sigma <= r.sigma_budget && r.gamma <= r.gamma_budget && r.phi <= r.phi_budget &&
           r.sup < r.sup_budget && r.lip < r.lip_budget;
    return r;
}

double curve_distance(const RepresentedCurve& a, const RepresentedCurve& b) {
    double q = std::min(a.q, b.q), d = 0.0;
    for (int i = 0; i < CURVE_GRID; ++i) {
        double t = -q + 2.0 * q * i / (CURVE_GRID - 1);
        d = std::max(d, std::fabs(a.eval(t) - b.eval(t)));
    }
    return d;
}

double curve_distance_c1(const RepresentedCurve& a, const RepresentedCurve& b) {
    double q = std::min(a.q, b.q), d = curve_distance(a, b);
    for (int i = 0; i < CURVE_GRID; ++i) {
        double t = -q + 2.0 * q * i / (CURVE_GRID - 1);
        d = std::max(d, std::fabs(a.eval_deriv(t) - b.eval_deriv(t)));
    }
    return d;
}

namespace {
// Push a graph through a local map whose image coordinate along the parameter
// axis is expanding: param_out selects that coordinate (1 for u-curves under f,
// 0 for s-curves under f^{-1}).
RepresentedCurve transform_graph(const LocalMap& lm, const RepresentedCurve& c, int param_out,
                                 double q_target, double beta) {
    RepresentedCurve out;
    out.kind = c.kind;
    out.q = q_target;
    int grid = int(c.ts.size());
    out.ts.resize(size_t(grid));
    out.F.resize(size_t(grid));
    out.Fp.resize(size_t(grid));

    auto image = [&](double t) { return lm.eval(c.point(t)); };
    auto pick = [&](Vec2 w) { return param_out == 1 ? w.y : w.x; };
    auto pick_val = [&](Vec2 w) { return param_out == 1 ? w.x : w.y; };

    double pa = pick(image(-c.q)), pb = pick(image(c.q));
    bool increasing = pb > pa;
    double lo = std::min(pa, pb), hi = std::max(pa, pb);
    for (int i = 0; i < grid; ++i) {
        double tau = -q_target + 2.0 * q_target * i / (grid - 1);
        out.ts[size_t(i)] = tau;
        if (tau < lo || tau > hi) {
            out.ok = false;  // image does not cover the target window
            return out;
        }
        // bisection to locate the preimage parameter, then Newton polish
        double a = -c.q, b = c.q;
        if (!increasing) std::swap(a, b);
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (a + b);
            if (pick(image(mid)) < tau)
                a = mid;
            else
                b = mid;
        }
        double t = 0.5 * (a + b);
        for (int it = 0; it < 5; ++it) {
            Vec2 w = image(t);
            Mat2 J = lm.jacobian(c.point(t));
            Vec2 tg = c.tangent(t);
            Vec2 dw = J * tg;
            double dpar = pick(dw);
            if (dpar == 0.0) break;
            double step = (pick(w) - tau) / dpar;
            t -= step;
            t = std::clamp(t, -c.q, c.q);
            if (std::fabs(step) < 1e-13 * c.q) break;
        }
        Vec2 w = image(t);
        Mat2 J = lm.jacobian(c.point(t));
        Vec2 dw = J * c.tangent(t);
        out.F[size_t(i)] = pick_val(w);
        out.Fp[size_t(i)] = pick_val(dw) / pick(dw);
    }
    recompute_params(out, beta);
    return out;
}
}  // namespace

RepresentedCurve transform_u(const LocalMap& lm, const RepresentedCurve& c, double q_target,
                             double beta) {
    return transform_graph(lm, c, 1, q_target, beta);
}

RepresentedCurve transform_s(const LocalMap& lm, const RepresentedCurve& c, double q_target,
                             double beta) {
    return transform_graph(lm, c, 0, q_target, beta);
}

IntersectResult intersect(const PesinChart& chart, const RepresentedCurve& Vu,
                          const RepresentedCurve& Vs, double rel_tol) {
    IntersectResult r;
    double scale = std::max(Vu.q, Vs.q);
    double t = 0.0;
    for (int it = 0; it < 200; ++it) {
        double nt = Vs.eval(Vu.eval(t));
        r.iters = it + 1;
        if (std::fabs(nt - t) <= rel_tol * scale) {
            t = nt;
            r.ok = true;
            break;
        }
        t = nt;
    }
    double s = Vu.eval(t);
    r.w = {s, t};
    r.p = chart.from_chart(r.w);
    Vec2 Tu = (chart.C.C * Vu.tangent(t)).normalized();
    Vec2 Ts = (chart.C.C * Vs.tangent(s)).normalized();
    double cr = Ts.cross(Tu);
    r.angle = std::atan2(std::fabs(cr), Ts.dot(Tu));
    r.alpha_chart = chart.alpha;
    return r;
}

ShadowResult shadow(const MapModel& f, const Chain& chain, size_t center, double seed_u,
                    double seed_s, bool with_gap) {
    ShadowResult out;
    size_t n = chain.elems.size();
    if (n == 0 || center >= n) return out;

    auto run = [&](size_t lo, size_t hi) -> ShadowResult {
        ShadowResult r;
        const auto& elems = chain.elems;
        RepresentedCurve Vu = flat_curve('u', elems[lo].p_u, seed_u);
        for (size_t k = lo; k < center; ++k) {
            LocalMap lm = local_map(f, elems[k].chart, elems[k + 1].chart, false);
            Vu = transform_u(lm, Vu, elems[k + 1].p_u, f.beta());
            if (!Vu.ok) return r;
            r.worst_sigma = std::max(r.worst_sigma, Vu.sigma);
            r.worst_phi_frac = std::max(r.worst_phi_frac, Vu.phi / (1e-3 * elems[k + 1].p_min()));
        }
        RepresentedCurve Vs = flat_curve('s', elems[hi].p_s, seed_s);
        for (size_t k = hi; k > center; --k) {
            LocalMap lm = local_map(f, elems[k].chart, elems[k - 1].chart, true);
            Vs = transform_s(lm, Vs, elems[k - 1].p_s, f.beta());
            if (!Vs.ok) return r;
            r.worst_sigma = std::max(r.worst_sigma, Vs.sigma);
            r.worst_phi_frac = std::max(r.worst_phi_frac, Vs.phi / (1e-3 * elems[k - 1].p_min()));
        }
        r.cross = intersect(elems[center].chart, Vu, Vs);
        r.ok = r.cross.ok;
        r.pi_chart = r.cross.w;
        r.pi = r.cross.p;
        r.Vu = std::move(Vu);
        r.Vs = std::move(Vs);
        return r;
    };

    out = run(0, n - 1);
    if (!out.ok) return out;
    if (with_gap && center >= 1 && center + 1 <= n - 2) {
        ShadowResult inner = run(1, n - 2);
        if (inner.ok) out.convergence_gap = (inner.pi_chart - out.pi_chart).norm();
    }
    return out;
}

ManifoldCheckReport local_manifold_checks(const MapModel& f, const OrbitData& o, long center,
                                          const RepresentedCurve& Vs, const DoubleChart& dc,
                                          double chi, int n_pairs, int k_max) {
    ManifoldCheckReport rep;
    rep.distortion_budget = std::pow(dc.chart.Q_eps, f.beta() / 4.0);
    long kmax = std::min<long>(k_max, o.n_pos - center);
    if (kmax < 1) return rep;

    const Mat2& C0 = dc.chart.C.C;
    int npts = std::max(2, n_pairs);
    std::vector<Vec2> off(static_cast<size_t>(npts));  // offsets from the orbit, R^2
    std::vector<double> logg(static_cast<size_t>(npts), 0.0);
    for (int i = 0; i < npts; ++i) {
        double t = -Vs.q + 2.0 * Vs.q * i / (npts - 1);
        off[size_t(i)] = C0 * Vs.point(t);
    }

    double ps0 = dc.p_s;
    double frob0 = dc.chart.C.frob_inv;
    rep.pair_ok = rep.tangent_ok = rep.distortion_ok = true;
    for (long k = 1; k <= kmax; ++k) {
        TorusPoint xk = o.at(center + k - 1).x;
        for (int i = 0; i < npts; ++i) {
            // difference vectors propagate through the stable propagator at the
            // true base orbit; the tangent cocycle is measured along the
            // refreshed stable direction at each propagated point (raw forward
            // propagation of a stable tangent loses the direction after ~19
            // steps in doubles)
            TorusPoint yi = exp_chart(xk, off[size_t(i)]);
            Vec2 es = estimate_splitting(f, yi, 32, chi).e_s;
            logg[size_t(i)] += std::log((f.d_forward(yi) * es).norm());
            off[size_t(i)] = f.forward_diff(xk, off[size_t(i)]);
        }
        double decay = std::exp(-0.5 * chi * k);
        for (int i = 0; i < npts; ++i) {
            double tb = std::exp(logg[size_t(i)]) / (6.0 * frob0 * decay);
            rep.worst_tangent_margin = std::max(rep.worst_tangent_margin, tb);
            for (int j = i + 1; j < npts; ++j) {
                double d = (off[size_t(i)] - off[size_t(j)]).norm();
                double pb = d / (6.0 * ps0 * decay);
                rep.worst_pair_margin = std::max(rep.worst_pair_margin, pb);
                double dist = std::fabs(logg[size_t(i)] - logg[size_t(j)]);
                rep.worst_distortion = std::max(rep.worst_distortion, dist);
            }
        }
    }
    rep.pair_ok = rep.worst_pair_margin <= 1.0;
    rep.tangent_ok = rep.worst_tangent_margin <= 1.0;
    rep.distortion_ok = rep.worst_distortion <= rep.distortion_budget;
    return rep;
}

ChainCompareReport compare_chains(const Chain& a, const Chain& b, double eps) {
    ChainCompareReport rep;
    rep.window_budget = long(std::floor(3.0 * std::pow(eps, -2.0 / 3.0)));
    size_t n = std::min(a.elems.size(), b.elems.size());
    rep.ok = n > 0;
    for (size_t i = 0; i < n; ++i) {
        const auto& da = a.elems[i];
        const auto& db = b.elems[i];
        ChainCompareEntry e;
        e.position_gap = torus_dist(da.chart.x, db.chart.x);
        e.position_budget = (da.p_min() + db.p_min()) / 25.0;
        // affine decomposition of Psi_b^{-1} Psi_a = (-1)^sigma Id + c + Delta
        Mat2 M = db.chart.C.C_inv * da.chart.C.C;
        double sgn = (M.a >= 0.0) ? 1.0 : -1.0;
        Vec2 c = db.chart.C.C_inv * log_chart(db.chart.x, da.chart.x);
        e.c_norm = c.norm();
        e.c_budget = 0.1 * std::min(da.p_min(), db.p_min());
        e.dpart = (db.chart.C.C_inv * (da.chart.C.C - db.chart.C.C * sgn)).opnorm();
        e.dpart_budget = std::sqrt(eps);
        e.sin_ratio = da.chart.sin_alpha / db.chart.sin_alpha;
        e.s_ratio = da.chart.s_chi / db.chart.s_chi;
        e.u_ratio = da.chart.u_chi / db.chart.u_chi;
        e.pu_diff = da.pu_ell - db.pu_ell;
        e.ps_diff = da.ps_ell - db.ps_ell;
        e.ok = e.position_gap < e.position_budget && e.c_norm < e.c_budget &&
               e.dpart < e.dpart_budget && std::labs(e.pu_diff) <= rep.window_budget &&
               std::labs(e.ps_diff) <= rep.window_budget;
        rep.ok = rep.ok && e.ok;
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace torcode
