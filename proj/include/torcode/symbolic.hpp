#pragma once
#include <span>

#include "markov.hpp"

namespace torcode {

// Topological Markov shift over the rectangle alphabet. Edges R -> S are
// witnessed by sampled class transitions landing in those rectangles.
struct MarkovShift {
    int n_states = 0;
    std::vector<std::vector<int>> succ, pred;
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> witnesses;  // class pairs

    bool edge(int a, int b) const {
        const auto& s = succ[size_t(a)];
        return std::find(s.begin(), s.end(), b) != s.end();
    }
};
MarkovShift build_hat_graph(const Cover& cov, const Refinement& ref);

// A point realizing a finite admissible word: DFS through the sampled coding
// transitions whose classes project to the prescribed rectangles. The point is
// the pi image of the middle coding of the witness path.
struct CylinderPoint {
    bool ok = false;
    TorusPoint p;
    std::vector<int> codings;  // witness coding per word position
};
CylinderPoint cylinder_point(const Cover& cov, const Refinement& ref, const MarkovShift& sh,
                             std::span<const int> word);

// Exact loop counts N_n = tr(A^n) for n = 1..n_max (128-bit accumulation,
// throws on overflow of the returned 64-bit values).
std::vector<unsigned long long> count_loops(const MarkovShift& sh, int n_max);

// Gurevich entropy from the loop counts: least-squares slope of ln N_n in n
// over the strictly positive counts.
struct EntropyFit {
    double h = 0.0;
    int n_used = 0;
    bool ok = false;
};
EntropyFit gurevich_entropy(std::span<const unsigned long long> counts);

// Periodic orbits from loops of the hat graph: a witness class representative
// seeds a damped Newton iteration on f^n(x) - x with the cocycle as Jacobian.
struct PeriodicPoint {
    TorusPoint x;
    int period = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<int> word;  // rectangle itinerary
};
std::vector<PeriodicPoint> periodic_points(const MapModel& f, const Cover& cov,
                                           const Refinement& ref, const MarkovShift& sh,
                                           int n_max, double tol = 1e-6, int max_iters = 50);

// Finite-to-one bound: a coded point has at most N(R) N(S) preimages, where
// N(R) counts the Z-sets a rectangle is affiliated with (meets).
struct PreimageBound {
    std::vector<int> affil;  // per rectangle
    int bound = 0;           // max over edges R -> S of N(R) N(S)
};
PreimageBound preimage_bound(const Cover& cov, const Refinement& ref, const MarkovShift& sh);

// Oseledets directions recovered from the coding's fiber tangents at pi,
// compared (as lines) against the orbit-based splitting estimate.
struct SplittingFromCoding {
    Vec2 e_u, e_s;
    double err_u = 0.0, err_s = 0.0;  // |sin angle| to the reference directions
    bool ok = false;
};
SplittingFromCoding splitting_from_coding(const MapModel& f, const Cover& cov, int coding,
                                          double chi);

}  // namespace torcode
