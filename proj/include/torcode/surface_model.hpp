#pragma once
#include <memory>
#include <string>
#include <vector>
#include <stdexcept>

#include "geometry.hpp"

namespace torcode {

// Point on T^2 = R^2 / Z^2, both coordinates kept in [0,1).
struct TorusPoint {
    double u = 0.0, v = 0.0;
    bool operator==(const TorusPoint&) const = default;
};

inline double wrap01(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r = 0.0;  // guards t = -1e-17 rounding up
    return r;
}

inline TorusPoint make_point(double u, double v) { return {wrap01(u), wrap01(v)}; }

// Shortest representative of b - a in the universal cover.
inline Vec2 torus_diff(TorusPoint a, TorusPoint b) {
    auto comp = [](double da) {
        double r = da - std::round(da);
        return r;
    };
    return {comp(b.u - a.u), comp(b.v - a.v)};
}

inline double torus_dist(TorusPoint a, TorusPoint b) { return torus_diff(a, b).norm(); }

// exp_x(v) and its inverse on the flat torus: injective for |v| < 1/2.
inline TorusPoint exp_chart(TorusPoint x, Vec2 v) { return make_point(x.u + v.x, x.v + v.y); }
inline Vec2 log_chart(TorusPoint x, TorusPoint y) { return torus_diff(x, y); }

// C^{1+beta} diffeomorphism of the torus. Forward/backward evaluation, exact
// Jacobians, and stable difference propagators: forward_diff(x,w) returns
// f(x+w)-f(x) without the cancellation that the naive composition suffers at
// |w| ~ 1e-11.
class MapModel {
public:
    virtual ~MapModel() = default;

    virtual TorusPoint forward(TorusPoint x) const = 0;
    virtual TorusPoint backward(TorusPoint y) const = 0;
    virtual Mat2 d_forward(TorusPoint x) const = 0;
    // Derivative of f^{-1} at y.
    virtual Mat2 d_backward(TorusPoint y) const { return d_forward(backward(y)).inverse(); }

    virtual Vec2 forward_diff(TorusPoint x, Vec2 w) const = 0;
    virtual Vec2 backward_diff(TorusPoint y, Vec2 w) const = 0;

    const std::string& name() const { return name_; }
    double beta() const { return beta_; }
    // sup-norm bound on f, f^{-1} in C^{1+beta} sense: M_f >= max(|df|, |df^{-1}|, Hoelder const).
    double M_f() const { return M_f_; }
    double hoelder_df() const { return hoelder_df_; }

protected:
    std::string name_;
    double beta_ = 1.0;
    double M_f_ = 0.0;
    double hoelder_df_ = 0.0;
};

// Hyperbolic toral automorphism x -> Ax mod 1, A integer with |det| = 1.
class ToralAutomorphism : public MapModel {
public:
    explicit ToralAutomorphism(long a, long b, long c, long d);
    TorusPoint forward(TorusPoint x) const override;
    TorusPoint backward(TorusPoint y) const override;
    Mat2 d_forward(TorusPoint) const override { return A_; }
    Mat2 d_backward(TorusPoint) const override { return Ainv_; }
    Vec2 forward_diff(TorusPoint, Vec2 w) const override { return A_ * w; }
    Vec2 backward_diff(TorusPoint, Vec2 w) const override { return Ainv_ * w; }
    const Mat2& matrix() const { return A_; }
    long ia, ib, ic, id;  // integer entries

private:
    Mat2 A_, Ainv_;
};

// f(x) = Ax + (delta/2pi)(sin 2pi v, sin 2pi u) mod 1. Analytic perturbation of
// the automorphism; hyperbolic for small delta.
class PerturbedAutomorphism : public MapModel {
public:
    PerturbedAutomorphism(long a, long b, long c, long d, double delta);
    TorusPoint forward(TorusPoint x) const override;
    TorusPoint backward(TorusPoint y) const override;
    Mat2 d_forward(TorusPoint x) const override;
    Vec2 forward_diff(TorusPoint x, Vec2 w) const override;
    Vec2 backward_diff(TorusPoint y, Vec2 w) const override;
    double delta() const { return delta_; }

private:
    Mat2 A_, Ainv_;
    double delta_;
};

// Chirikov standard map: p' = p + (K/2pi) sin 2pi q, q' = q + p'.
class StandardMap : public MapModel {
public:
    explicit StandardMap(double K);
    TorusPoint forward(TorusPoint x) const override;   // x = (q, p)
    TorusPoint backward(TorusPoint y) const override;
    Mat2 d_forward(TorusPoint x) const override;
    Mat2 d_backward(TorusPoint y) const override;
    Vec2 forward_diff(TorusPoint x, Vec2 w) const override;
    Vec2 backward_diff(TorusPoint y, Vec2 w) const override;
    double K() const { return K_; }

private:
    double K_;
};

// Named zoo: "cat", "cat:a,b,c,d", "perturbed_cat:delta", "standard:K".
std::unique_ptr<MapModel> make_map(const std::string& spec);

TorusPoint iterate(const MapModel& f, TorusPoint x, long n);
// d(f^n) at x (n may be negative).
Mat2 cocycle(const MapModel& f, TorusPoint x, long n);

}  // namespace torcode
