#pragma once
#include <optional>
#include <span>
#include <vector>

#include "surface_model.hpp"

namespace torcode {

// Oseledets data at a point, estimated from a finite window of the orbit.
struct HyperbolicFrame {
    TorusPoint x;
    Vec2 e_s, e_u;        // unit vectors; e_s oriented into the upper half plane,
                          // e_u chosen so that (e_s, e_u) is positively oriented
    double alpha = 0.0;   // angle from e_s to e_u, in (0, pi)
    double sin_alpha = 0.0;
    double lam_hat = 0.0;  // finite-window exponent along e_s (negative if hyperbolic)
    double mu_hat = 0.0;   // finite-window exponent along e_u
    int horizon = 0;
    bool accepted = false;
    bool degenerate = false;
};

struct LyapunovScales {
    double s_chi = 0.0, u_chi = 0.0;
    double chi = 0.0;
    int terms_s = 0, terms_u = 0;
    double tail_bound = 0.0;  // bound on the dropped tail of the larger series
    bool diverged = false;
};

struct LinearizationC {
    Mat2 C, C_inv;
    double frob_inv = 0.0;  // ||C^{-1}||_Frobenius
    double op_inv = 0.0;
};

// Geometric lattice I_eps = { e^{-l eps/3} : l = 0,1,2,... }.
struct LatticeIeps {
    double eps;
    double value(long l) const { return std::exp(-double(l) * eps / 3.0); }
    // largest lattice value <= q (smallest l with value <= q); q must be in (0,1].
    long index_floor(double q) const {
        long l = (long)std::ceil(-3.0 * std::log(q) / eps - 1e-12);
        if (l < 0) l = 0;
        while (value(l) > q) ++l;
        return l;
    }
    double floor_value(double q) const { return value(index_floor(q)); }
};

struct ChartSize {
    double Q_tilde = 0.0;  // eps^{3/beta} ||C^{-1}||_F^{-12/beta}
    double Q_eps = 0.0;    // Q_tilde rounded down into I_eps
    long ell = 0;          // lattice index of Q_eps
};

// C_f = M_f (1 + M_f^6)^{1/2}; a priori bound on the linearized expansion rates.
inline double C_f_bound(double M_f) { return M_f * std::sqrt(1.0 + std::pow(M_f, 6.0)); }

// Two-sided power iteration over the window [-N, N] of the orbit of x.
HyperbolicFrame estimate_splitting(const MapModel& f, TorusPoint x, int N, double chi,
                                   double margin = 0.05);

// s_chi, u_chi by adaptive truncation of the defining series (relative tol),
// capped at max_terms; diverged is set if the terms fail to decay.
LyapunovScales lyapunov_scales(const MapModel& f, const HyperbolicFrame& frame, double chi,
                               double tol = 1e-10, int max_terms = 10000);

LinearizationC build_C(const HyperbolicFrame& frame, const LyapunovScales& scales);

// Diagonal entries of C(f(x))^{-1} df_x C(x) plus the off-diagonal residue.
struct ReduceResult {
    double lambda_chi = 0.0, mu_chi = 0.0;  // signed diagonal entries
    double off_diag = 0.0;                  // max |off-diagonal| (should vanish)
};
ReduceResult reduce(const MapModel& f, TorusPoint x, const LinearizationC& Cx,
                    const LinearizationC& Cfx);

ChartSize chart_size(const LinearizationC& C, double eps, double beta);

// 1/q_n = (1/eps) sum_k e^{-|k-n| eps/3} / Q_k over the given window, all centers
// at once (O(L) two-pass recurrence). Truncation only shrinks q, and the ratio
// bound q_{n+1}/q_n in [e^{-eps/3}, e^{eps/3}] holds exactly for any window.
std::vector<double> q_epsilon(std::span<const double> Q, double eps);

}  // namespace torcode
