#pragma once
#include <memory>
#include <string>
#include <vector>

#include "reduction.hpp"

namespace torcode {

// Pesin chart Psi_x = exp_x o C(x), restricted to the square [-eta, eta]^2.
// Carries enough of the reduction record to evaluate overlap consequences.
struct PesinChart {
    TorusPoint x;
    LinearizationC C;
    double Q_eps = 0.0;
    long Q_ell = 0;       // lattice index of Q_eps
    double eta = 0.0;     // chart size, in I_eps, 0 < eta <= Q_eps
    long eta_ell = 0;
    double s_chi = 0.0, u_chi = 0.0;
    double alpha = 0.0, sin_alpha = 0.0;

    Vec2 to_chart(TorusPoint p) const { return C.C_inv * log_chart(x, p); }
    TorusPoint from_chart(Vec2 v) const { return exp_chart(x, C.C * v); }
};

PesinChart make_chart(TorusPoint x, const LinearizationC& C, const ChartSize& Q,
                      const LyapunovScales& sc, const HyperbolicFrame& fr, double eta, double eps);

// eps-overlap: e^{-eps} < eta1/eta2 < e^{eps} and d(x1,x2) + |C1 - C2| < eta1^4 eta2^4.
struct OverlapWitness {
    bool ok = false;
    double ratio = 0.0;      // eta1/eta2
    double dist_term = 0.0;  // d(x1,x2) + ||C1 - C2||
    double dist_budget = 0.0;
};
OverlapWitness overlaps(const PesinChart& c1, const PesinChart& c2, double eps);

// Consequences of an overlap: containment of the shrunk square, C^1 distance of
// the transition map to +/-Id on a grid, and the s/u-parameter ratios.
struct OverlapReport {
    bool nested = false;
    double transition_c1 = 0.0;  // sup-grid C^1 distance of Psi_1^{-1} Psi_2 to (-1)^sigma Id
    double transition_budget = 0.0;
    int sigma = 0;
    double s_ratio = 1.0, u_ratio = 1.0;
    double ratio_budget = 0.0;  // allowed |ratio - 1|
    bool ok = false;
};
OverlapReport overlap_consequences(const PesinChart& c1, const PesinChart& c2, double eps);

// f in chart coordinates: f_xy = Psi_y^{-1} o f o Psi_x, evaluated through the
// stable difference propagators so the affine-plus-small decomposition survives
// at eta ~ 1e-11. inverse_mode swaps f for f^{-1}.
struct LocalMap {
    const MapModel* map = nullptr;
    PesinChart src, dst;
    bool inverse_mode = false;
    double A = 0.0, B = 0.0;  // diagonal of the derivative at 0
    Vec2 c0;                  // Psi_y^{-1}(f(x)), zero when y is the stored image point

    Vec2 eval(Vec2 v) const;
    Mat2 jacobian(Vec2 v) const;
    Vec2 h(Vec2 v) const {  // nonlinear remainder (h1, h2)
        Vec2 w = eval(v);
        return {w.x - A * v.x, w.y - B * v.y};
    }
    // bounds certified on a grid over [-r, r]^2 (with 1.05 safety factor)
    struct Bounds {
        double h0 = 0.0;        // max |h_i(0)|
        double grad0 = 0.0;     // max ||grad h_i(0)||
        double hoelder = 0.0;   // max Hoelder-(beta/3) quotient of grad h_i
        bool ok = false;
        double budget_h0 = 0.0, budget_grad0 = 0.0, budget_hoelder = 0.0;
    };
    Bounds certify(double r, double eps, double beta, int grid = 41) const;
};

LocalMap local_map(const MapModel& f, const PesinChart& src, const PesinChart& dst,
                   bool inverse_mode = false);

// Double chart Psi_x^{pu,ps} plus orbit context: the charts the sampler built at
// f(x) and f^{-1}(x). The context charts are bitwise-consistent with the orbit,
// which is what lets the overlap condition in the edge relation hold at the
// eta^8 tolerance scale.
struct DoubleChart {
    PesinChart chart;
    double p_u = 0.0, p_s = 0.0;
    long pu_ell = 0, ps_ell = 0;
    std::shared_ptr<PesinChart> fwd, bwd;  // charts at f(x), f^{-1}(x)

    double p_min() const { return std::min(p_u, p_s); }
    long pmin_ell() const { return std::max(pu_ell, ps_ell); }
};

// Edge relation v -> w: (i) Psi_{y}^{q_u ^ q_s} overlaps the context chart at
// f(x) with the same size; (ii) symmetric condition through f^{-1}(y); (iii)
// q_u = min(e^eps p_u, Q(y)) and p_s = min(e^eps q_s, Q(x)), checked on the
// integer lattice (e^eps = 3 lattice steps).
struct EdgeWitness {
    bool ok = false;
    bool cond_i = false, cond_ii = false, cond_iii = false;
    OverlapWitness w_i, w_ii;
};
EdgeWitness edge(const DoubleChart& v, const DoubleChart& w, double eps);

// The smallness conditions the construction imposes on eps, evaluated for a
// concrete map. Each entry reports the two sides of an inequality.
struct EpsConstraint {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    bool ok = false;
    bool required = true;  // false: flagged residual constraint, reported only
};
std::vector<EpsConstraint> validate_epsilon(const MapModel& f, double chi, double eps);
bool epsilon_ok(const std::vector<EpsConstraint>& cs);

}  // namespace torcode
