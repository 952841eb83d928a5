#pragma once
#include <cstdint>
#include <unordered_map>

#include "charts.hpp"

namespace torcode {

// Full reduction record at one orbit point.
struct PointData {
    TorusPoint x;
    HyperbolicFrame frame;
    LyapunovScales scales;
    LinearizationC C;
    ChartSize Q;
    bool ok = false;
};

PointData analyze_point(const MapModel& f, TorusPoint x, double chi, double eps, int horizon,
                        double margin = 0.05);

// Orbit segment x_{-n_neg}, ..., x_{n_pos} built forward-only from the leftmost
// point, so that x_{k+1} is bitwise f(x_k); the edge relation depends on that.
struct OrbitData {
    int id = 0;
    long n_neg = 0, n_pos = 0;
    std::vector<PointData> pts;                          // index k -> pts[k + n_neg]
    std::vector<std::shared_ptr<PesinChart>> charts;     // eta = Q_eps charts
    bool valid = true;                                   // all points accepted

    const PointData& at(long k) const { return pts[size_t(k + n_neg)]; }
    const std::shared_ptr<PesinChart>& chart_at(long k) const { return charts[size_t(k + n_neg)]; }
};

OrbitData sample_orbit(const MapModel& f, TorusPoint seed, long n_neg, long n_pos, double chi,
                       double eps, int horizon);

// All fixed points of f^n for a toral automorphism, enumerated exactly via the
// adjugate of A^n - I (rationals with denominator |det(A^n - I)|).
std::vector<TorusPoint> periodic_lattice_points(const ToralAutomorphism& f, int n);

struct SampleConfig {
    int n_orbits = 100;
    long n_neg = 20, n_pos = 20;
    std::uint64_t rng_seed = 20260826;
    bool include_periodic = true;
    int periodic_max_n = 4;
    long periodic_n_pos = 40;  // periodic orbits get a longer forward leg
};

// Random seeds are dyadic multiples of 2^-26 (they iterate bitwise-exactly
// under integer automorphisms); periodic lattice seeds are appended for
// automorphisms when requested.
std::vector<OrbitData> sample_orbits(const MapModel& f, double chi, double eps, int horizon,
                                     const SampleConfig& cfg);

// One alphabet element: a chart kept by the coarse-graining net, with its
// scale bucket (k, m) and provenance.
struct AlphabetEntry {
    std::shared_ptr<PesinChart> chart;
    int k = 0, m = 0;
    int orbit_id = 0;
    long orbit_index = 0;
    int merged = 1;  // how many sampled charts this net element absorbed
};

struct Alphabet {
    std::vector<AlphabetEntry> entries;
    // (orbit_id, index) -> entry id, for every sampled point (merged or kept)
    std::unordered_map<std::uint64_t, int> assignment;
};

// Greedy net per (k, m) bucket, deterministic order: a chart is merged into an
// existing entry when d(f^i x, f^i y) + ||C_i - C_i'|| < e^{-8(m+2)} for
// i in {-1,0,1} and the Q ratios stay within e^{eps/3}.
Alphabet coarse_grain(const std::vector<OrbitData>& orbits, double eps);

// Chain of double charts over an orbit window [from, to]; element i sits at
// orbit index from + i.
struct Chain {
    int orbit_id = 0;
    long k0 = 0;
    std::vector<DoubleChart> elems;
    std::vector<double> eta;  // admissible size sequence (lattice values)
};

// Sizes eta_k from the q_epsilon window sums; p^u by the left-to-right lattice
// recursion l_pu(k) = max(l_pu(k-1) - 3, l_Q(k)), p^s mirrored right-to-left.
Chain orbit_to_chain(const OrbitData& o, double eps, long from, long to);

// p^u over a window by the subordination formula, as lattice indices:
// l(k) = max over n>=0 of is min... value form p(k) = min_{m<=k} e^{eps(k-m)} Q_m.
std::vector<long> subordinate(std::span<const long> Q_ell, bool unstable);

struct ChartGraph {
    std::vector<DoubleChart> vertices;
    std::vector<std::vector<int>> succ, pred;
    std::vector<std::vector<int>> chain_vertex;  // per input chain, vertex id per element
    int n_pruned = 0;
    int n_scc = 0;  // strongly connected components among surviving vertices
    std::vector<int> scc_id;
};

// Vertices deduplicated on (center bits, l_pu, l_ps); edges from consecutive
// chain elements, each validated by the edge predicate; vertices without both
// an in- and an out-edge are removed iteratively.
ChartGraph build_graph(const std::vector<Chain>& chains, double eps);

}  // namespace torcode
