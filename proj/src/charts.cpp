#include "torcode/charts.hpp"

#include <cmath>

namespace torcode {

PesinChart make_chart(TorusPoint x, const LinearizationC& C, const ChartSize& Q,
                      const LyapunovScales& sc, const HyperbolicFrame& fr, double eta,
                      double eps) {
    PesinChart c;
    c.x = x;
    c.C = C;
    c.Q_eps = Q.Q_eps;
    c.Q_ell = Q.ell;
    c.eta = eta;
    c.eta_ell = LatticeIeps{eps}.index_floor(eta * (1.0 + 1e-12));
    c.s_chi = sc.s_chi;
    c.u_chi = sc.u_chi;
    c.alpha = fr.alpha;
    c.sin_alpha = fr.sin_alpha;
    return c;
}

OverlapWitness overlaps(const PesinChart& c1, const PesinChart& c2, double eps) {
    OverlapWitness w;
    w.ratio = c1.eta / c2.eta;
    w.dist_term = torus_dist(c1.x, c2.x) + (c1.C.C - c2.C.C).frob();
    w.dist_budget = std::pow(c1.eta, 4.0) * std::pow(c2.eta, 4.0);
    bool ratio_ok = w.ratio > std::exp(-eps) && w.ratio < std::exp(eps);
    w.ok = ratio_ok && w.dist_term < w.dist_budget;
    return w;
}

OverlapReport overlap_consequences(const PesinChart& c1, const PesinChart& c2, double eps) {
    OverlapReport r;
    // transition map Psi_2^{-1} o Psi_1 is affine on the flat torus: M v + c
    Mat2 M = c2.C.C_inv * c1.C.C;
    Vec2 c = c2.C.C_inv * log_chart(c2.x, c1.x);

    double inner = std::exp(-2.0 * eps) * c1.eta;
    // containment of the shrunk square: check the four corners
    r.nested = true;
    for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) {
            Vec2 img = M * Vec2{sx * inner, sy * inner} + c;
            if (img.norm_inf() > c2.eta) r.nested = false;
        }

    r.sigma = (M.a >= 0.0) ? 0 : 1;
    double sgn = (r.sigma == 0) ? 1.0 : -1.0;
    // D = C2^{-1}(C1 - sgn C2) rather than M - sgn I: the former is exactly zero
    // for coinciding charts, the latter only up to the roundoff of the stored
    // inverse, which would swamp the eps eta^4 budget
    Mat2 D = c2.C.C_inv * (c1.C.C - c2.C.C * sgn);
    // affine map: C^1 distance to (-1)^sigma Id over the shrunk square
    r.transition_c1 = D.opnorm() * inner * std::numbers::sqrt2 + c.norm() + D.opnorm();
    r.transition_budget = eps * c1.eta * c1.eta * c2.eta * c2.eta;

    r.s_ratio = c1.s_chi / c2.s_chi;
    r.u_ratio = c1.u_chi / c2.u_chi;
    r.ratio_budget = eps * c1.eta * c2.eta;

    bool ratios_ok = std::fabs(r.s_ratio - 1.0) < r.ratio_budget &&
                     std::fabs(r.u_ratio - 1.0) < r.ratio_budget;
    r.ok = r.nested && r.transition_c1 < r.transition_budget && ratios_ok;
    return r;
}

Vec2 LocalMap::eval(Vec2 v) const {
    Vec2 w = src.C.C * v;
    Vec2 d = inverse_mode ? map->backward_diff(src.x, w) : map->forward_diff(src.x, w);
    return dst.C.C_inv * d + c0;
}

Mat2 LocalMap::jacobian(Vec2 v) const {
    TorusPoint p = exp_chart(src.x, src.C.C * v);
    Mat2 J = inverse_mode ? map->d_backward(p) : map->d_forward(p);
    return dst.C.C_inv * (J * src.C.C);
}

LocalMap local_map(const MapModel& f, const PesinChart& src, const PesinChart& dst,
                   bool inverse_mode) {
    LocalMap lm;
    lm.map = &f;
    lm.src = src;
    lm.dst = dst;
    lm.inverse_mode = inverse_mode;
    TorusPoint img = inverse_mode ? f.backward(src.x) : f.forward(src.x);
    // Orbits are built forward-only, so dst.x IS the preimage of src.x whenever
    // they are consecutive orbit points; the numerically evaluated backward()
    // misses it by ~1e-16, which at chart scale ~1e-11 would be a fake offset.
    if (inverse_mode && torus_dist(img, dst.x) < 1e-13)
        lm.c0 = {0.0, 0.0};
    else
        lm.c0 = dst.C.C_inv * log_chart(dst.x, img);
    Mat2 J0 = lm.jacobian({0.0, 0.0});
    lm.A = J0.a;
    lm.B = J0.d;
    return lm;
}

LocalMap::Bounds LocalMap::certify(double r, double eps, double beta, int grid) const {
    Bounds b;
    double eta = src.eta;
    b.budget_h0 = eps * eta;
    b.budget_grad0 = eps * std::pow(eta, beta / 3.0);
    b.budget_hoelder = eps;

    Vec2 h0v = h({0.0, 0.0});
    b.h0 = h0v.norm_inf();

    auto grad_h = [&](Vec2 v) {
        Mat2 J = jacobian(v);
        return std::pair<Vec2, Vec2>{{J.a - A, J.b}, {J.c, J.d - B}};
    };
    auto [g1, g2] = grad_h({0.0, 0.0});
    b.grad0 = std::max(g1.norm(), g2.norm());

    // Hoelder quotient of grad h_i on a grid over [-r,r]^2: adjacent pairs on
    // the full grid plus all pairs on a strided subset, with a safety factor.
    std::vector<Vec2> pts;
    std::vector<std::pair<Vec2, Vec2>> grads;
    double step = 2.0 * r / (grid - 1);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            Vec2 v{-r + i * step, -r + j * step};
            pts.push_back(v);
            grads.push_back(grad_h(v));
        }
    double q = 0.0;
    auto quot = [&](size_t i, size_t j) {
        double dn = std::pow((pts[i] - pts[j]).norm(), beta / 3.0);
        if (dn == 0.0) return;
        double q1 = (grads[i].first - grads[j].first).norm() / dn;
        double q2 = (grads[i].second - grads[j].second).norm() / dn;
        q = std::max({q, q1, q2});
    };
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j + 1 < grid; ++j) {
            quot(size_t(i) * grid + j, size_t(i) * grid + j + 1);
            quot(size_t(j) * grid + i, size_t(j + 1) * grid + i);
        }
    std::vector<size_t> sub;
    for (int i = 0; i < grid; i += 4)
        for (int j = 0; j < grid; j += 4) sub.push_back(size_t(i) * grid + j);
    for (size_t a = 0; a < sub.size(); ++a)
        for (size_t c = a + 1; c < sub.size(); ++c) quot(sub[a], sub[c]);
    b.hoelder = 1.05 * q;

    b.ok = b.h0 < b.budget_h0 && b.grad0 < b.budget_grad0 && b.hoelder < b.budget_hoelder;
    return b;
}

EdgeWitness edge(const DoubleChart& v, const DoubleChart& w, double eps) {
    EdgeWitness e;
    // (iii) on the integer lattice: e^eps is exactly 3 lattice steps
    e.cond_iii = (w.pu_ell == std::max(v.pu_ell - 3, w.chart.Q_ell)) &&
                 (v.ps_ell == std::max(w.ps_ell - 3, v.chart.Q_ell));

    if (v.fwd) {
        PesinChart a = w.chart, b = *v.fwd;
        a.eta = b.eta = std::min(w.p_u, w.p_s);
        e.w_i = overlaps(a, b, eps);
        e.cond_i = e.w_i.ok;
    }
    if (w.bwd) {
        PesinChart a = v.chart, b = *w.bwd;
        a.eta = b.eta = std::min(v.p_u, v.p_s);
        e.w_ii = overlaps(a, b, eps);
        e.cond_ii = e.w_ii.ok;
    }
    e.ok = e.cond_i && e.cond_ii && e.cond_iii;
    return e;
}

std::vector<EpsConstraint> validate_epsilon(const MapModel& f, double chi, double eps) {
    std::vector<EpsConstraint> cs;
    double Cf = C_f_bound(f.M_f());
    auto add = [&](std::string name, double lhs, double rhs, bool required = true) {
        cs.push_back({std::move(name), lhs, rhs, lhs < rhs, required});
    };
    // injectivity / distortion budget of the charts (flat torus: r = 1/4)
    add("overlap_wellposed  eps^3 < r/(5*27^{3/beta})", std::pow(eps, 3.0),
        0.25 / (5.0 * std::pow(27.0, 3.0 / f.beta())));
    add("contraction_margin  e^{-chi} + 4 eps^2 < e^{-chi/2}",
        std::exp(-chi) + 4.0 * eps * eps, std::exp(-chi / 2.0));
    add("rate_bracket_low  e^{-chi/2} + eps < e^{-chi/3}", std::exp(-chi / 2.0) + eps,
        std::exp(-chi / 3.0));
    add("rate_bracket_high  e^{chi/3} <= e^{chi/2} - eps", std::exp(chi / 3.0),
        std::exp(chi / 2.0) - eps + 1e-15);
    add("net_scale  2 e^{-8}(1 + e^{8 eps}) < 1",
        2.0 * std::exp(-8.0) * (1.0 + std::exp(8.0 * eps)), 1.0);
    add("perturbation_radius  30 C_f eps^3 < e^{-eps} r", 30.0 * Cf * std::pow(eps, 3.0),
        std::exp(-eps) * 0.25);
    // ||F||_inf budget for admissible graphs, sharp form: Q_eps <= eps^3 / 2^12
    // because ||C^{-1}||_F >= 2 always (s,u >= sqrt2, sin alpha <= 1).
    double Qbound = std::pow(eps, 3.0 / f.beta()) * std::pow(2.0, -12.0 / f.beta());
    add("graph_sup_budget  1e-3 + Q^{beta/3} < 1e-2",
        1e-3 + std::pow(Qbound, f.beta() / 3.0), 1e-2);
    // Worst-case residual constraint; vacuous at realistic C_f, the quantity it
    // controls (local-map Hoelder bounds) is certified directly. Report only.
    add("residual  (3 C_f + 2) sqrt(eps) < 1", (3.0 * Cf + 2.0) * std::sqrt(eps), 1.0,
        false);
    return cs;
}

bool epsilon_ok(const std::vector<EpsConstraint>& cs) {
    for (const auto& c : cs)
        if (c.required && !c.ok) return false;
    return true;
}

}  // namespace torcode
