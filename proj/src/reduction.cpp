#include "torcode/reduction.hpp"

#include <cmath>

namespace torcode {

namespace {
// Dominant direction of a matrix product accumulated with rescaling: returns
// normalize(M w) where w is the leading right singular vector of M.
Vec2 dominant_image(const Mat2& M) {
    Mat2 G = M.transpose() * M;
    Vec2 w = G.sym_leading_eigvec();
    Vec2 v = M * w;
    if (v.norm() == 0.0) return {1.0, 0.0};
    return v.normalized();
}
}  // namespace

HyperbolicFrame estimate_splitting(const MapModel& f, TorusPoint x, int N, double chi,
                                   double margin) {
    HyperbolicFrame fr;
    fr.x = x;
    fr.horizon = N;

    // orbit segments
    std::vector<TorusPoint> fwd(N + 1), bwd(N + 1);
    fwd[0] = bwd[0] = x;
    for (int k = 1; k <= N; ++k) fwd[k] = f.forward(fwd[k - 1]);
    for (int k = 1; k <= N; ++k) bwd[k] = f.backward(bwd[k - 1]);

    // e_u = dominant image of df^N along the backward orbit, rescaled each step
    Mat2 Mu;
    for (int k = N; k >= 1; --k) {
        Mu = f.d_forward(bwd[k]) * Mu;
        Mu = Mu * (1.0 / Mu.frob());
    }
    // e_s = dominant image of df^{-N} pulled back along the forward orbit
    Mat2 Ms;
    for (int k = N; k >= 1; --k) {
        Ms = f.d_backward(fwd[k]) * Ms;
        Ms = Ms * (1.0 / Ms.frob());
    }
    // near-isotropic products cannot identify a direction
    double cond_u = Mu.opnorm() / std::max(Mu.opnorm_min(), 1e-300);
    double cond_s = Ms.opnorm() / std::max(Ms.opnorm_min(), 1e-300);
    if (cond_u < 1.0 + 1e-6 || cond_s < 1.0 + 1e-6) fr.degenerate = true;

    Vec2 eu = dominant_image(Mu), es = dominant_image(Ms);

    // orientation conventions
    if (es.y < 0.0 || (es.y == 0.0 && es.x < 0.0)) es = -es;
    if (es.cross(eu) < 0.0) eu = -eu;
    fr.e_s = es;
    fr.e_u = eu;
    double cr = es.cross(eu);
    fr.alpha = std::atan2(cr, es.dot(eu));
    fr.sin_alpha = cr;
    if (std::fabs(cr) < 1e-14) fr.degenerate = true;

    // finite-window exponents, each measured in the direction of time where the
    // vector is dominant (forward for e_u, backward for e_s) so rounding noise
    // cannot leak into the other exponent
    auto exponent = [&](Vec2 v, bool forward_dir) {
        double acc = 0.0;
        TorusPoint p = x;
        for (int k = 0; k < N; ++k) {
            v = forward_dir ? f.d_forward(p) * v : f.d_backward(p) * v;
            double n = v.norm();
            acc += std::log(n);
            v = v * (1.0 / n);
            p = forward_dir ? fwd[k + 1] : bwd[k + 1];
        }
        return acc / N;
    };
    fr.mu_hat = exponent(eu, true);
    fr.lam_hat = -exponent(es, false);

    fr.accepted = !fr.degenerate && fr.mu_hat > chi + margin && fr.lam_hat < -chi - margin;
    return fr;
}

LyapunovScales lyapunov_scales(const MapModel& f, const HyperbolicFrame& frame, double chi,
                               double tol, int max_terms) {
    LyapunovScales out;
    out.chi = chi;
    double g2 = std::exp(2.0 * chi);

    // sum_{k>=0} e^{2k chi} |df^k e_s|^2 (and the mirror series for u). Raw
    // propagation of e_s forward is unstable: rounding noise leaks into the
    // expanding direction and overtakes the product after ~35 steps. Instead
    // the invariant direction at every orbit point is recovered by propagating
    // from a settled horizon in the direction of time where it is dominant,
    // then the growth factors are taken one step at a time.
    const int settle = 64;
    auto series = [&](bool s_series, int& terms) {
        int K = 64;
        double sum = 1.0;
        while (true) {
            std::vector<TorusPoint> pts(K + settle + 1);
            pts[0] = frame.x;
            for (int i = 1; i <= K + settle; ++i)
                pts[i] = s_series ? f.forward(pts[i - 1]) : f.backward(pts[i - 1]);
            std::vector<Vec2> dir(K + 1);
            Vec2 v = s_series ? frame.e_s : frame.e_u;
            for (int i = K + settle; i >= 1; --i) {
                v = (s_series ? f.d_backward(pts[i]) : f.d_forward(pts[i])) * v;
                v = v.normalized();
                if (i - 1 <= K) dir[i - 1] = v;
            }
            sum = 1.0;
            double logprod = 0.0, prev_lt = 0.0;
            int bad = 0;
            bool done = false;
            for (int k = 1; k <= K; ++k) {
                Vec2 img = (s_series ? f.d_forward(pts[k - 1]) : f.d_backward(pts[k - 1])) *
                           dir[k - 1];
                logprod += std::log(img.norm());
                double lt = k * std::log(g2) + 2.0 * logprod;
                double term = std::exp(lt);
                sum += term;
                terms = k;
                if (lt >= prev_lt && k > 1) {
                    if (++bad >= 10 || lt > 60.0) {
                        out.diverged = true;
                        done = true;
                        break;
                    }
                } else {
                    bad = 0;
                }
                prev_lt = lt;
                if (term < tol * sum) {
                    double ratio = g2 * img.dot(img);  // one-step term ratio
                    out.tail_bound = std::max(
                        out.tail_bound, term * ratio / std::max(1.0 - ratio, 1e-3));
                    done = true;
                    break;
                }
            }
            if (done) break;
            if (2 * K > max_terms) {
                out.diverged = true;
                break;
            }
            K *= 2;
        }
        return std::sqrt(2.0 * sum);
    };

    out.s_chi = series(true, out.terms_s);
    out.u_chi = series(false, out.terms_u);
    return out;
}

LinearizationC build_C(const HyperbolicFrame& frame, const LyapunovScales& scales) {
    LinearizationC out;
    double s = scales.s_chi, u = scales.u_chi;
    double sa = std::sin(frame.alpha), ca = std::cos(frame.alpha);
    // R rotates e1 to e_s
    Mat2 R{frame.e_s.x, -frame.e_s.y, frame.e_s.y, frame.e_s.x};
    Mat2 T{1.0 / s, ca / u, 0.0, sa / u};
    out.C = R * T;
    Mat2 Tinv{s, -s * ca / sa, 0.0, u / sa};
    out.C_inv = Tinv * R.transpose();
    out.frob_inv = out.C_inv.frob();
    out.op_inv = out.C_inv.opnorm();
    return out;
}

ReduceResult reduce(const MapModel& f, TorusPoint x, const LinearizationC& Cx,
                    const LinearizationC& Cfx) {
    Mat2 D = Cfx.C_inv * (f.d_forward(x) * Cx.C);
    return {D.a, D.d, std::max(std::fabs(D.b), std::fabs(D.c))};
}

ChartSize chart_size(const LinearizationC& C, double eps, double beta) {
    ChartSize out;
    out.Q_tilde = std::pow(eps, 3.0 / beta) * std::pow(C.frob_inv, -12.0 / beta);
    LatticeIeps lat{eps};
    out.ell = lat.index_floor(out.Q_tilde);
    out.Q_eps = lat.value(out.ell);
    return out;
}

std::vector<double> q_epsilon(std::span<const double> Q, double eps) {
    size_t L = Q.size();
    std::vector<double> left(L), right(L), q(L);
    double r = std::exp(-eps / 3.0);
    for (size_t n = 0; n < L; ++n) left[n] = (n ? r * left[n - 1] : 0.0) + 1.0 / Q[n];
    for (size_t n = L; n-- > 0;) right[n] = (n + 1 < L ? r * right[n + 1] : 0.0) + 1.0 / Q[n];
    for (size_t n = 0; n < L; ++n) q[n] = eps / (left[n] + right[n] - 1.0 / Q[n]);
    return q;
}

}  // namespace torcode
