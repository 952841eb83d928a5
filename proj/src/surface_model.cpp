#include "torcode/surface_model.hpp"

#include <numbers>
#include <sstream>

namespace torcode {

namespace {
constexpr double TWO_PI = 2.0 * std::numbers::pi;

// sin(t + dt) - sin(t) = 2 cos(t + dt/2) sin(dt/2); taking dt as an argument
// (instead of subtracting two nearby angles) keeps full relative precision in
// the increment, which matters at |dt| ~ 1e-11.
double sin_incr(double t, double dt) {
    return 2.0 * std::cos(t + 0.5 * dt) * std::sin(0.5 * dt);
}

// Grid-estimated constants for nonlinear members of the zoo.
void grid_constants(const MapModel& f, double& M_f, double& hoelder) {
    const int N = 41;
    double m = 0.0, h = 0.0;
    const double step = 1.0 / N;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            TorusPoint x{i * step, j * step};
            Mat2 J = f.d_forward(x);
            m = std::max({m, J.opnorm(), J.inverse().opnorm()});
            // Hoelder quotient against the two forward grid neighbours.
            for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
                TorusPoint y{wrap01((i + di) * step), wrap01((j + dj) * step)};
                Mat2 Jy = f.d_forward(y);
                double q = (Jy - J).frob() / std::pow(step, f.beta());
                h = std::max(h, q);
            }
        }
    }
    M_f = std::max(1.05 * m, 1.0);
    hoelder = 1.1 * h;
}
}  // namespace

// ---- ToralAutomorphism ----

ToralAutomorphism::ToralAutomorphism(long a, long b, long c, long d)
    : ia(a), ib(b), ic(c), id(d) {
    long dt = a * d - b * c;
    if (dt != 1 && dt != -1) throw std::invalid_argument("toral automorphism needs |det| = 1");
    A_ = {double(a), double(b), double(c), double(d)};
    // integer inverse, exact
    Ainv_ = {double(d * dt), double(-b * dt), double(-c * dt), double(a * dt)};
    name_ = "toral_automorphism";
    beta_ = 1.0;
    M_f_ = std::max({A_.opnorm(), Ainv_.opnorm(), 1.0});
    hoelder_df_ = 0.0;
}

TorusPoint ToralAutomorphism::forward(TorusPoint x) const {
    return make_point(ia * x.u + ib * x.v, ic * x.u + id * x.v);
}

TorusPoint ToralAutomorphism::backward(TorusPoint y) const {
    return make_point(Ainv_.a * y.u + Ainv_.b * y.v, Ainv_.c * y.u + Ainv_.d * y.v);
}

// ---- PerturbedAutomorphism ----

PerturbedAutomorphism::PerturbedAutomorphism(long a, long b, long c, long d, double delta)
    : delta_(delta) {
    ToralAutomorphism base(a, b, c, d);
    A_ = base.matrix();
    Ainv_ = A_.inverse();
    name_ = "perturbed_automorphism";
    beta_ = 1.0;
    if (Ainv_.opnorm() * delta >= 0.5)
        throw std::invalid_argument("perturbation too large for invertibility margin");
    grid_constants(*this, M_f_, hoelder_df_);
    // analytic bound on the Lipschitz constant of df dominates the grid estimate
    hoelder_df_ = std::max(hoelder_df_, TWO_PI * std::fabs(delta));
}

TorusPoint PerturbedAutomorphism::forward(TorusPoint x) const {
    double g1 = (delta_ / TWO_PI) * std::sin(TWO_PI * x.v);
    double g2 = (delta_ / TWO_PI) * std::sin(TWO_PI * x.u);
    return make_point(A_.a * x.u + A_.b * x.v + g1, A_.c * x.u + A_.d * x.v + g2);
}

TorusPoint PerturbedAutomorphism::backward(TorusPoint y) const {
    // fixed point of x -> A^{-1}(y - g(x)); contraction factor |A^{-1}| delta
    TorusPoint x = make_point(Ainv_.a * y.u + Ainv_.b * y.v, Ainv_.c * y.u + Ainv_.d * y.v);
    for (int it = 0; it < 200; ++it) {
        double g1 = (delta_ / TWO_PI) * std::sin(TWO_PI * x.v);
        double g2 = (delta_ / TWO_PI) * std::sin(TWO_PI * x.u);
        double r1 = y.u - g1, r2 = y.v - g2;
        TorusPoint nx = make_point(Ainv_.a * r1 + Ainv_.b * r2, Ainv_.c * r1 + Ainv_.d * r2);
        double d = torus_dist(x, nx);
        x = nx;
        if (d < 1e-16) break;
    }
    return x;
}

Mat2 PerturbedAutomorphism::d_forward(TorusPoint x) const {
    Mat2 J = A_;
    J.b += delta_ * std::cos(TWO_PI * x.v);
    J.c += delta_ * std::cos(TWO_PI * x.u);
    return J;
}

Vec2 PerturbedAutomorphism::forward_diff(TorusPoint x, Vec2 w) const {
    double s1 = (delta_ / TWO_PI) * sin_incr(TWO_PI * x.v, TWO_PI * w.y);
    double s2 = (delta_ / TWO_PI) * sin_incr(TWO_PI * x.u, TWO_PI * w.x);
    return (A_ * w) + Vec2{s1, s2};
}

Vec2 PerturbedAutomorphism::backward_diff(TorusPoint y, Vec2 w) const {
    // z solves z = A^{-1}(w - [g(x+z) - g(x)]) with x = f^{-1}(y)
    TorusPoint x = backward(y);
    Vec2 z = Ainv_ * w;
    for (int it = 0; it < 200; ++it) {
        double s1 = (delta_ / TWO_PI) * sin_incr(TWO_PI * x.v, TWO_PI * z.y);
        double s2 = (delta_ / TWO_PI) * sin_incr(TWO_PI * x.u, TWO_PI * z.x);
        Vec2 nz = Ainv_ * (w - Vec2{s1, s2});
        double d = (nz - z).norm();
        z = nz;
        // purely relative stop: |z| can be ~1e-11 (chart-window offsets), where
        // any absolute floor would freeze the iteration at ~1e-9 relative error
        if (d <= 1e-16 * z.norm()) break;
    }
    return z;
}

// ---- StandardMap ----

StandardMap::StandardMap(double K) : K_(K) {
    name_ = "standard_map";
    beta_ = 1.0;
    grid_constants(*this, M_f_, hoelder_df_);
    hoelder_df_ = std::max(hoelder_df_, TWO_PI * std::fabs(K));
}

TorusPoint StandardMap::forward(TorusPoint x) const {
    double p1 = x.v + (K_ / TWO_PI) * std::sin(TWO_PI * x.u);
    double q1 = x.u + p1;
    return make_point(q1, p1);
}

TorusPoint StandardMap::backward(TorusPoint y) const {
    double q = y.u - y.v;
    double p = y.v - (K_ / TWO_PI) * std::sin(TWO_PI * q);
    return make_point(q, p);
}

Mat2 StandardMap::d_forward(TorusPoint x) const {
    double c = K_ * std::cos(TWO_PI * x.u);
    return {1.0 + c, 1.0, c, 1.0};
}

Mat2 StandardMap::d_backward(TorusPoint y) const {
    double c = K_ * std::cos(TWO_PI * (y.u - y.v));
    return {1.0, -1.0, -c, 1.0 + c};
}

Vec2 StandardMap::forward_diff(TorusPoint x, Vec2 w) const {
    double dp = w.y + (K_ / TWO_PI) * sin_incr(TWO_PI * x.u, TWO_PI * w.x);
    return {w.x + dp, dp};
}

Vec2 StandardMap::backward_diff(TorusPoint y, Vec2 w) const {
    double dq = w.x - w.y;
    double q = y.u - y.v;
    double dp = w.y - (K_ / TWO_PI) * sin_incr(TWO_PI * q, TWO_PI * dq);
    return {dq, dp};
}

// ---- factory / orbits ----

std::unique_ptr<MapModel> make_map(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string args = (colon == std::string::npos) ? "" : spec.substr(colon + 1);
    auto split = [&]() {
        std::vector<double> out;
        std::stringstream ss(args);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    if (head == "cat") {
        if (args.empty()) return std::make_unique<ToralAutomorphism>(2, 1, 1, 1);
        auto v = split();
        if (v.size() != 4) throw std::invalid_argument("cat:a,b,c,d");
        return std::make_unique<ToralAutomorphism>(long(v[0]), long(v[1]), long(v[2]), long(v[3]));
    }
    if (head == "perturbed_cat") {
        auto v = split();
        if (v.size() == 1) return std::make_unique<PerturbedAutomorphism>(2, 1, 1, 1, v[0]);
        if (v.size() == 5)
            return std::make_unique<PerturbedAutomorphism>(long(v[0]), long(v[1]), long(v[2]),
                                                           long(v[3]), v[4]);
        throw std::invalid_argument("perturbed_cat:delta");
    }
    if (head == "standard") {
        auto v = split();
        if (v.size() != 1) throw std::invalid_argument("standard:K");
        return std::make_unique<StandardMap>(v[0]);
    }
    throw std::invalid_argument("unknown map spec: " + spec);
}

TorusPoint iterate(const MapModel& f, TorusPoint x, long n) {
    for (long k = 0; k < n; ++k) x = f.forward(x);
    for (long k = 0; k > n; --k) x = f.backward(x);
    return x;
}

Mat2 cocycle(const MapModel& f, TorusPoint x, long n) {
    Mat2 M;
    if (n >= 0) {
        for (long k = 0; k < n; ++k) {
            M = f.d_forward(x) * M;
            x = f.forward(x);
        }
    } else {
        for (long k = 0; k > n; --k) {
            M = f.d_backward(x) * M;
            x = f.backward(x);
        }
    }
    return M;
}

}  // namespace torcode
