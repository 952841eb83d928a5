#pragma once
#include <map>
#include <optional>

#include "manifolds.hpp"

namespace torcode {

// One coded point: a shadowed window of a chain, centered on a graph vertex.
struct Coding {
    int chain_id = 0;
    size_t elem_index = 0;  // center position within the chain
    int vertex = -1;        // chart-graph vertex of the center double chart
    PesinChart chart;       // center chart (the one the shadow intersects in)
    ShadowResult sh;
};

struct CoverConfig {
    size_t window = 6;                   // half-width of the coding window
    double identity_resolution = 1e-8;   // pi-image clustering scale
    double membership_resolution = 1e-7; // point-on-fiber test scale
    double seed_u = 0.0, seed_s = 0.0;   // seed offsets for the shadowing
};

// The cover {Z(v)}: codings, their pi-image classes (union-find over grid
// cells with neighbour search, so near-boundary pairs still merge), the Z-sets
// indexed by graph vertex, and the sampled one-step transitions.
struct Cover {
    const ChartGraph* graph = nullptr;
    CoverConfig cfg;
    std::vector<Coding> codings;
    std::vector<int> cls;          // coding -> class id
    int n_classes = 0;
    std::vector<TorusPoint> rep;   // class -> representative pi image
    std::vector<std::vector<int>> class_members;        // class -> coding ids
    std::map<int, std::vector<int>> Z;                  // vertex -> sorted class ids
    std::vector<std::pair<int, int>> transitions;       // consecutive coding ids
    std::vector<std::vector<int>> class_succ;           // class -> successor classes

    const Coding& coding_of_class(int c) const { return codings[size_t(class_members[size_t(c)][0])]; }
};

Cover build_cover(const MapModel& f, const std::vector<Chain>& chains, const ChartGraph& g,
                  double eps, const CoverConfig& cfg);

// u/s fiber of a class inside Z(v): the shadowed manifolds of one of its
// codings centered at v, plus the member classes of Z(v) lying on them.
struct Fiber {
    const RepresentedCurve* curve = nullptr;
    int coding = -1;
    std::vector<int> on_fiber;  // class ids within membership resolution
};
Fiber fiber_of(const Cover& cov, int cls_id, int vertex, char kind);

// distance from a class representative to a coding's fiber curve, in physical units
double point_to_fiber(const Cover& cov, int coding, char kind, TorusPoint p);

// Smale bracket [x, y] inside Z(v): V^u(x) cap V^s(y) for codings a, b at the
// same vertex.
IntersectResult bracket(const Cover& cov, int coding_a, int coding_b);

// Bracket commutation: f(bracket(a, b)) vs bracket(a', b') along
// sampled transitions a->a', b->b' with matching vertices.
struct MarkovCheckReport {
    int checked = 0;
    int failures = 0;
    double worst_gap = 0.0;  // physical distance
    bool ok = false;
};
MarkovCheckReport symbolic_markov_check(const MapModel& f, const Cover& cov, double tol);

// Refinement of the cover into rectangles by T-set profiles: two classes land
// in the same rectangle iff they share all memberships x in Z_j, and fiber
// intersections V^alpha(x, Z_i) cap Z_j != {} for every Z_i containing x.
struct Rectangle {
    int id = 0;
    std::vector<int> classes;
    std::vector<int> in_Z;  // vertices whose Z-set contains the rectangle
};
struct Refinement {
    std::vector<Rectangle> rects;
    std::vector<int> rect_of_class;
    bool disjoint_cover = true;  // every class in exactly one rectangle
    bool subordinate = true;     // every rectangle inside some Z
};
Refinement refine(const Cover& cov);

// W^u(x, R), W^s(x, R): member classes of the rectangle on the fiber of x.
struct RectangleFibers {
    std::vector<int> Wu, Ws;
    bool product_ok = true;  // brackets of members stay in the rectangle
    int bracket_checked = 0;
};
RectangleFibers rectangle_fibers(const Cover& cov, const Refinement& ref, int rect_id,
                                 int cls_id);

}  // namespace torcode
