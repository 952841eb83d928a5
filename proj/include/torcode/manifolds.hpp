#pragma once
#include "alphabet.hpp"

namespace torcode {

// Graph of a candidate invariant curve in chart coordinates. u-curves are
// {(F(t), t) : |t| <= q}, s-curves are {(t, F(t)) : |t| <= q}; values and
// derivatives are held on a uniform grid and interpolated by cubic Hermite.
struct RepresentedCurve {
    char kind = 'u';
    double q = 0.0;
    std::vector<double> ts, F, Fp;
    double sigma = 0.0, gamma = 0.0, phi = 0.0;  // Hoelder norm of F', |F'(0)|, |F(0)|
    bool ok = true;

    double eval(double t) const;
    double eval_deriv(double t) const;
    Vec2 point(double t) const { return kind == 'u' ? Vec2{eval(t), t} : Vec2{t, eval(t)}; }
    Vec2 tangent(double t) const {
        return kind == 'u' ? Vec2{eval_deriv(t), 1.0} : Vec2{1.0, eval_deriv(t)};
    }
};

constexpr int CURVE_GRID = 65;

RepresentedCurve flat_curve(char kind, double q, double value, int grid = CURVE_GRID);
void recompute_params(RepresentedCurve& c, double beta);

// Admissibility with respect to a double chart: sigma <= 1/2,
// gamma <= (p_u ^ p_s)^{beta/3} / 2, phi <= 1e-3 (p_u ^ p_s).
struct AdmissibilityReport {
    bool ok = false;
    double sigma = 0.0, sigma_budget = 0.5;
    double gamma = 0.0, gamma_budget = 0.0;
    double phi = 0.0, phi_budget = 0.0;
    double sup = 0.0, sup_budget = 0.0;  // consequence: |F|_inf < 1e-2 Q
    double lip = 0.0, lip_budget = 0.0;  // consequence: Lip(F) < eps
};
AdmissibilityReport admissible(const RepresentedCurve& c, const DoubleChart& dc, double eps,
                               double beta);

// C^0 and C^1 distances on the common parameter range.
double curve_distance(const RepresentedCurve& a, const RepresentedCurve& b);
double curve_distance_c1(const RepresentedCurve& a, const RepresentedCurve& b);

// Graph transform along one edge. transform_u pushes a u-curve forward through
// the chart-coordinate map (lm in forward mode, src = chart of the curve);
// transform_s pushes an s-curve backward (lm in inverse mode). The expanding
// image coordinate is inverted per target node by bisection plus Newton.
RepresentedCurve transform_u(const LocalMap& lm, const RepresentedCurve& c, double q_target,
                             double beta);
RepresentedCurve transform_s(const LocalMap& lm, const RepresentedCurve& c, double q_target,
                             double beta);

struct IntersectResult {
    bool ok = false;
    Vec2 w;            // chart coordinates of the intersection
    TorusPoint p;
    int iters = 0;
    double angle = 0.0;       // angle between the curve tangents at the point
    double alpha_chart = 0.0; // angle between e_s and e_u of the chart
};
IntersectResult intersect(const PesinChart& chart, const RepresentedCurve& Vu,
                          const RepresentedCurve& Vs, double rel_tol = 1e-12);

// Shadowing: push flat seed curves from both window ends to the middle and
// intersect. convergence_gap compares against the window shrunk by one.
struct ShadowResult {
    bool ok = false;
    Vec2 pi_chart;
    TorusPoint pi;
    RepresentedCurve Vu, Vs;
    IntersectResult cross;
    double convergence_gap = -1.0;  // absolute, in chart units; -1 if not computed
    double worst_sigma = 0.0;       // worst admissibility margins along the way
    double worst_phi_frac = 0.0;    // max phi / (1e-3 p_min)
};
ShadowResult shadow(const MapModel& f, const Chain& chain, size_t center, double seed_u,
                    double seed_s, bool with_gap = true);

// Prop-6.3-style checks along the forward orbit: pair contraction on V^s,
// tangent decay, and cocycle distortion along the curve.
struct ManifoldCheckReport {
    bool pair_ok = false, tangent_ok = false, distortion_ok = false;
    double worst_pair_margin = 0.0;      // max over k of dist / (6 p_s e^{-k chi/2})
    double worst_tangent_margin = 0.0;   // max over k of |df^k T| / (6 |C^{-1}| e^{-k chi/2})
    double worst_distortion = 0.0;       // max |log ratio| of cocycles along the curve
    double distortion_budget = 0.0;      // Q_eps^{beta/4}
};
ManifoldCheckReport local_manifold_checks(const MapModel& f, const OrbitData& o, long center,
                                          const RepresentedCurve& Vs, const DoubleChart& dc,
                                          double chi, int n_pairs = 8, int k_max = 30);

// Per-index comparison of two chains over the same index range.
struct ChainCompareEntry {
    double position_gap = 0.0, position_budget = 0.0;
    double c_norm = 0.0, c_budget = 0.0;          // affine offset of Psi_y^{-1} Psi_x
    double dpart = 0.0, dpart_budget = 0.0;       // derivative part of the transition
    double sin_ratio = 1.0;
    double s_ratio = 1.0, u_ratio = 1.0;
    long pu_diff = 0, ps_diff = 0;                // lattice index differences
    bool ok = false;
};
struct ChainCompareReport {
    std::vector<ChainCompareEntry> entries;
    bool ok = false;
    long window_budget = 0;  // allowed lattice index difference, floor(3 eps^{-2/3})
};
ChainCompareReport compare_chains(const Chain& a, const Chain& b, double eps);

}  // namespace torcode
