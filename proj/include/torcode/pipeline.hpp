#pragma once
#include <string>

#include "symbolic.hpp"

namespace torcode {

// Every tolerance and size knob, with defaults tuned for the cat map at
// chi = 0.5, eps = 0.01. Loadable from UTF-8 key=value text ('#' comments,
// [section] headers ignored); unknown keys are configuration errors.
struct PipelineConfig {
    std::string map = "cat";
    double chi = 0.5;
    double eps = 0.01;
    int horizon = 64;
    int n_orbits = 100;
    long n_neg = 20, n_pos = 20;
    std::uint64_t rng_seed = 20260826;
    bool include_periodic = true;
    int periodic_max_n = 4;
    long periodic_n_pos = 40;
    long chain_margin = 2;                // orbit indices trimmed per side for chains
    int window = 6;                       // coding half-window
    double identity_resolution = 1e-8;
    double membership_resolution = 1e-7;
    int loops_n_max = 14;
    double newton_tol = 1e-6;
    double markov_tol = 1e-7;
    std::string out_dir = "out";
    bool force = false;                   // proceed despite epsilon-ledger failure
};

// returns false with a message on bad syntax, unknown keys, or invalid values
bool set_option(PipelineConfig& cfg, const std::string& key, const std::string& value,
                std::string& err);
bool load_config(PipelineConfig& cfg, const std::string& path, std::string& err);
bool validate_config(const PipelineConfig& cfg, std::string& err);
std::string config_text(const PipelineConfig& cfg);

enum class Stage { sample = 0, reduce, alphabet, chains, cover, refine, shift, count };
constexpr int N_STAGES = 8;
const char* stage_name(Stage s);
bool stage_from_name(const std::string& name, Stage& out);

// Everything the stages produce, in order. reduce is part of sampling (every
// sampled point carries its reduction); the stage re-derives and re-checks it.
struct PipelineData {
    PipelineConfig cfg;
    std::unique_ptr<MapModel> map;
    std::vector<EpsConstraint> ledger;

    std::vector<OrbitData> orbits;        // sample + reduce
    Alphabet alphabet;                    // alphabet
    std::vector<Chain> chains;            // chains
    ChartGraph graph;
    Cover cover;                          // cover
    MarkovCheckReport markov;             // refine
    Refinement ref;
    MarkovShift shift;                    // shift
    std::vector<unsigned long long> loop_counts;  // count
    EntropyFit entropy;
    std::vector<PeriodicPoint> periodic;
    PreimageBound preimage;

    Stage reached = Stage::sample;
    bool started = false;
    std::string error;  // non-empty after a stage failure
};

// Runs stages sample..up_to in order (deterministic, so re-running a prefix
// reproduces identical state). Returns 0, or 3 with d.error set.
int run_stages(PipelineData& d, Stage up_to);

// Per-stage artifacts under cfg.out_dir: CSV tables, plain-text edge lists.
// Byte-identical across runs with the same config.
bool write_artifacts(const PipelineData& d, Stage stage, std::string& err);
std::string report_json(const PipelineData& d);
std::string render_svg(const PipelineData& d, double fiber_scale = 2e9);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};
// The twelve acceptance criteria; runs the pipeline plus the extra suites.
std::vector<CriterionResult> run_acceptance(const PipelineConfig& base);

}  // namespace torcode
