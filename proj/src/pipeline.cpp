#include "torcode/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace torcode {

namespace {
std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool parse_bool(const std::string& v, bool& out) {
    if (v == "1" || v == "true" || v == "yes") out = true;
    else if (v == "0" || v == "false" || v == "no") out = false;
    else return false;
    return true;
}
}  // namespace

bool set_option(PipelineConfig& cfg, const std::string& key, const std::string& value,
                std::string& err) {
    auto num = [&](auto& field) {
        std::istringstream is(value);
        is >> field;
        if (is.fail() || !is.eof()) {
            err = "bad value for " + key + ": " + value;
            return false;
        }
        return true;
    };
    if (key == "map") { cfg.map = value; return true; }
    if (key == "out_dir") { cfg.out_dir = value; return true; }
    if (key == "chi") return num(cfg.chi);
    if (key == "eps") return num(cfg.eps);
    if (key == "horizon") return num(cfg.horizon);
    if (key == "n_orbits") return num(cfg.n_orbits);
    if (key == "n_neg") return num(cfg.n_neg);
    if (key == "n_pos") return num(cfg.n_pos);
    if (key == "rng_seed") return num(cfg.rng_seed);
    if (key == "periodic_max_n") return num(cfg.periodic_max_n);
    if (key == "periodic_n_pos") return num(cfg.periodic_n_pos);
    if (key == "chain_margin") return num(cfg.chain_margin);
    if (key == "window") return num(cfg.window);
    if (key == "identity_resolution") return num(cfg.identity_resolution);
    if (key == "membership_resolution") return num(cfg.membership_resolution);
    if (key == "loops_n_max") return num(cfg.loops_n_max);
    if (key == "newton_tol") return num(cfg.newton_tol);
    if (key == "markov_tol") return num(cfg.markov_tol);
    if (key == "include_periodic") {
        if (!parse_bool(value, cfg.include_periodic)) { err = "bad bool: " + value; return false; }
        return true;
    }
    if (key == "force") {
        if (!parse_bool(value, cfg.force)) { err = "bad bool: " + value; return false; }
        return true;
    }
    err = "unknown option: " + key;
    return false;
}

bool load_config(PipelineConfig& cfg, const std::string& path, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open config: " + path;
        return false;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        std::string body = line.substr(a, b - a + 1);
        if (body.front() == '[' && body.back() == ']') continue;  // section header
        size_t eq = body.find('=');
        if (eq == std::string::npos) {
            err = path + ":" + std::to_string(lineno) + ": expected key=value";
            return false;
        }
        auto trim = [](std::string s) {
            size_t x = s.find_first_not_of(" \t");
            size_t y = s.find_last_not_of(" \t");
            return x == std::string::npos ? std::string{} : s.substr(x, y - x + 1);
        };
        if (!set_option(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)), err)) {
            err = path + ":" + std::to_string(lineno) + ": " + err;
            return false;
        }
    }
    return true;
}

bool validate_config(const PipelineConfig& cfg, std::string& err) {
    if (!(cfg.chi > 0)) { err = "chi must be positive"; return false; }
    if (!(cfg.eps > 0 && cfg.eps <= 0.2)) { err = "eps must be in (0, 0.2]"; return false; }
    if (cfg.horizon < 4) { err = "horizon too small"; return false; }
    if (cfg.n_orbits < 0 || cfg.n_neg < 0 || cfg.n_pos < 1) { err = "bad orbit sizes"; return false; }
    if (cfg.window < 1) { err = "window must be >= 1"; return false; }
    if (!(cfg.identity_resolution > 0 && cfg.identity_resolution < cfg.membership_resolution)) {
        err = "need 0 < identity_resolution < membership_resolution";
        return false;
    }
    if (cfg.loops_n_max < 1) { err = "loops_n_max must be >= 1"; return false; }
    try {
        auto m = make_map(cfg.map);
        (void)m;
    } catch (const std::exception& e) {
        err = std::string("bad map spec: ") + e.what();
        return false;
    }
    return true;
}

std::string config_text(const PipelineConfig& c) {
    std::ostringstream os;
    os << "[run]\n"
       << "map = " << c.map << "\nchi = " << fmt_g(c.chi) << "\neps = " << fmt_g(c.eps)
       << "\nhorizon = " << c.horizon << "\nout_dir = " << c.out_dir << "\nforce = " << c.force
       << "\n[sampling]\n"
       << "n_orbits = " << c.n_orbits << "\nn_neg = " << c.n_neg << "\nn_pos = " << c.n_pos
       << "\nrng_seed = " << c.rng_seed << "\ninclude_periodic = " << c.include_periodic
       << "\nperiodic_max_n = " << c.periodic_max_n << "\nperiodic_n_pos = " << c.periodic_n_pos
       << "\n[coding]\n"
       << "chain_margin = " << c.chain_margin << "\nwindow = " << c.window
       << "\nidentity_resolution = " << fmt_g(c.identity_resolution)
       << "\nmembership_resolution = " << fmt_g(c.membership_resolution)
       << "\nloops_n_max = " << c.loops_n_max << "\nnewton_tol = " << fmt_g(c.newton_tol)
       << "\nmarkov_tol = " << fmt_g(c.markov_tol) << "\n";
    return os.str();
}

const char* stage_name(Stage s) {
    static const char* names[N_STAGES] = {"sample", "reduce",  "alphabet", "chains",
                                          "cover",  "refine", "shift",    "count"};
    return names[int(s)];
}

bool stage_from_name(const std::string& name, Stage& out) {
    for (int i = 0; i < N_STAGES; ++i)
        if (name == stage_name(Stage(i))) {
            out = Stage(i);
            return true;
        }
    return false;
}

namespace {
int fail_stage(PipelineData& d, Stage s, const std::string& msg) {
    d.error = std::string(stage_name(s)) + ": " + msg;
    return 3;
}
}  // namespace

int run_stages(PipelineData& d, Stage up_to) {
    if (!d.started) {
        if (!validate_config(d.cfg, d.error)) return 2;
        d.map = make_map(d.cfg.map);
        d.ledger = validate_epsilon(*d.map, d.cfg.chi, d.cfg.eps);
        if (!epsilon_ok(d.ledger) && !d.cfg.force) {
            d.error = "epsilon ledger rejected chi/eps for this map (use force to override)";
            return 2;
        }
        d.started = true;
    }

    // sample (and per-point reduction, which sampling already performs)
    if (d.orbits.empty()) {
        SampleConfig sc;
        sc.n_orbits = d.cfg.n_orbits;
        sc.n_neg = d.cfg.n_neg;
        sc.n_pos = d.cfg.n_pos;
        sc.rng_seed = d.cfg.rng_seed;
        sc.include_periodic = d.cfg.include_periodic;
        sc.periodic_max_n = d.cfg.periodic_max_n;
        sc.periodic_n_pos = d.cfg.periodic_n_pos;
        d.orbits = sample_orbits(*d.map, d.cfg.chi, d.cfg.eps, d.cfg.horizon, sc);
        size_t valid = 0;
        for (const auto& o : d.orbits) valid += o.valid;
        if (valid == 0)
            return fail_stage(d, Stage::sample,
                              "no orbit passed the hyperbolicity margin (map not chi-hyperbolic "
                              "at the sampled points)");
    }
    d.reached = std::max(d.reached, Stage::sample);
    if (up_to == Stage::sample) return 0;

    // reduce: re-derive the diagonalization along each orbit and check it
    if (int(d.reached) < int(Stage::reduce)) {
        double worst = 0.0;
        for (const auto& o : d.orbits) {
            if (!o.valid) continue;
            for (long k = -o.n_neg; k < o.n_pos; ++k) {
                auto r = reduce(*d.map, o.at(k).x, o.at(k).C, o.at(k + 1).C);
                worst = std::max(worst, r.off_diag);
            }
        }
        if (worst > 1e-8)
            return fail_stage(d, Stage::reduce,
                              "reduction off-diagonal residue " + fmt_g(worst) + " exceeds 1e-8");
        d.reached = Stage::reduce;
    }
    if (up_to == Stage::reduce) return 0;

    if (int(d.reached) < int(Stage::alphabet)) {
        d.alphabet = coarse_grain(d.orbits, d.cfg.eps);
        if (d.alphabet.entries.empty())
            return fail_stage(d, Stage::alphabet, "empty alphabet (no valid interior points)");
        d.reached = Stage::alphabet;
    }
    if (up_to == Stage::alphabet) return 0;

    if (int(d.reached) < int(Stage::chains)) {
        for (const auto& o : d.orbits) {
            if (!o.valid) continue;
            long from = -o.n_neg + d.cfg.chain_margin, to = o.n_pos - d.cfg.chain_margin;
            if (to - from + 1 < 2 * long(d.cfg.window) + 1) continue;
            auto ch = orbit_to_chain(o, d.cfg.eps, from, to);
            if (!ch.elems.empty()) d.chains.push_back(std::move(ch));
        }
        if (d.chains.empty()) return fail_stage(d, Stage::chains, "no admissible chains");
        d.graph = build_graph(d.chains, d.cfg.eps);
        d.reached = Stage::chains;
    }
    if (up_to == Stage::chains) return 0;

    if (int(d.reached) < int(Stage::cover)) {
        CoverConfig cc;
        cc.window = size_t(d.cfg.window);
        cc.identity_resolution = d.cfg.identity_resolution;
        cc.membership_resolution = d.cfg.membership_resolution;
        d.cover = build_cover(*d.map, d.chains, d.graph, d.cfg.eps, cc);
        if (d.cover.codings.empty())
            return fail_stage(d, Stage::cover, "no codings (no recurrent chart-graph vertices)");
        d.reached = Stage::cover;
    }
    if (up_to == Stage::cover) return 0;

    if (int(d.reached) < int(Stage::refine)) {
        d.markov = symbolic_markov_check(*d.map, d.cover, d.cfg.markov_tol);
        if (d.markov.failures > 0)
            return fail_stage(d, Stage::refine, "markov bracket commutation violated");
        d.ref = refine(d.cover);
        if (!d.ref.disjoint_cover || !d.ref.subordinate)
            return fail_stage(d, Stage::refine, "refinement not a subordinate disjoint cover");
        d.reached = Stage::refine;
    }
    if (up_to == Stage::refine) return 0;

    if (int(d.reached) < int(Stage::shift)) {
        d.shift = build_hat_graph(d.cover, d.ref);
        d.reached = Stage::shift;
    }
    if (up_to == Stage::shift) return 0;

    if (int(d.reached) < int(Stage::count)) {
        try {
            d.loop_counts = count_loops(d.shift, d.cfg.loops_n_max);
        } catch (const std::exception& e) {
            return fail_stage(d, Stage::count, e.what());
        }
        d.entropy = gurevich_entropy(d.loop_counts);
        d.periodic = periodic_points(*d.map, d.cover, d.ref, d.shift,
                                     std::min(d.cfg.loops_n_max, 6), d.cfg.newton_tol);
        d.preimage = preimage_bound(d.cover, d.ref, d.shift);
        d.reached = Stage::count;
    }
    return 0;
}

namespace {
std::FILE* open_out(const std::string& dir, const char* name, std::string& err) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string path = dir + "/" + name;
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) err = "cannot write " + path;
    return fp;
}
}  // namespace

bool write_artifacts(const PipelineData& d, Stage stage, std::string& err) {
    const std::string& dir = d.cfg.out_dir;
    switch (stage) {
        case Stage::sample: {
            std::FILE* fp = open_out(dir, "orbits.csv", err);
            if (!fp) return false;
            std::fputs("orbit,k,u,v,accepted,mu_hat,lam_hat\n", fp);
            for (const auto& o : d.orbits)
                for (long k = -o.n_neg; k <= o.n_pos; ++k) {
                    const auto& p = o.at(k);
                    std::fprintf(fp, "%d,%ld,%s,%s,%d,%s,%s\n", o.id, k, fmt_g(p.x.u).c_str(),
                                 fmt_g(p.x.v).c_str(), int(p.frame.accepted),
                                 fmt_g(p.frame.mu_hat).c_str(), fmt_g(p.frame.lam_hat).c_str());
                }
            std::fclose(fp);
            return true;
        }
        case Stage::reduce: {
            std::FILE* fp = open_out(dir, "reduction.csv", err);
            if (!fp) return false;
            std::fputs("orbit,k,s_chi,u_chi,frob_inv,alpha,Q_eps,ell\n", fp);
            for (const auto& o : d.orbits)
                for (long k = -o.n_neg; k <= o.n_pos; ++k) {
                    const auto& p = o.at(k);
                    if (!p.ok) continue;
                    std::fprintf(fp, "%d,%ld,%s,%s,%s,%s,%s,%ld\n", o.id, k,
                                 fmt_g(p.scales.s_chi).c_str(), fmt_g(p.scales.u_chi).c_str(),
                                 fmt_g(p.C.frob_inv).c_str(), fmt_g(p.frame.alpha).c_str(),
                                 fmt_g(p.Q.Q_eps).c_str(), p.Q.ell);
                }
            std::fclose(fp);
            return true;
        }
        case Stage::alphabet: {
            std::FILE* fp = open_out(dir, "alphabet.csv", err);
            if (!fp) return false;
            std::fputs("entry,orbit,index,u,v,Q_eps,k,m,merged\n", fp);
            for (size_t i = 0; i < d.alphabet.entries.size(); ++i) {
                const auto& e = d.alphabet.entries[i];
                std::fprintf(fp, "%zu,%d,%ld,%s,%s,%s,%d,%d,%d\n", i, e.orbit_id, e.orbit_index,
                             fmt_g(e.chart->x.u).c_str(), fmt_g(e.chart->x.v).c_str(),
                             fmt_g(e.chart->Q_eps).c_str(), e.k, e.m, e.merged);
            }
            std::fclose(fp);
            return true;
        }
        case Stage::chains: {
            std::FILE* fp = open_out(dir, "chains.csv", err);
            if (!fp) return false;
            std::fputs("chain,i,u,v,eta,pu_ell,ps_ell\n", fp);
            for (size_t c = 0; c < d.chains.size(); ++c)
                for (size_t i = 0; i < d.chains[c].elems.size(); ++i) {
                    const auto& e = d.chains[c].elems[i];
                    std::fprintf(fp, "%zu,%zu,%s,%s,%s,%ld,%ld\n", c, i, fmt_g(e.chart.x.u).c_str(),
                                 fmt_g(e.chart.x.v).c_str(), fmt_g(d.chains[c].eta[i]).c_str(),
                                 e.pu_ell, e.ps_ell);
                }
            std::fclose(fp);
            fp = open_out(dir, "graph_vertices.csv", err);
            if (!fp) return false;
            std::fputs("vertex,u,v,pu_ell,ps_ell,scc\n", fp);
            for (size_t v = 0; v < d.graph.vertices.size(); ++v) {
                const auto& dc = d.graph.vertices[v];
                std::fprintf(fp, "%zu,%s,%s,%ld,%ld,%d\n", v, fmt_g(dc.chart.x.u).c_str(),
                             fmt_g(dc.chart.x.v).c_str(), dc.pu_ell, dc.ps_ell,
                             v < d.graph.scc_id.size() ? d.graph.scc_id[v] : -1);
            }
            std::fclose(fp);
            fp = open_out(dir, "graph_edges.txt", err);
            if (!fp) return false;
            for (size_t v = 0; v < d.graph.succ.size(); ++v)
                for (int w : d.graph.succ[v]) std::fprintf(fp, "%zu %d\n", v, w);
            std::fclose(fp);
            return true;
        }
        case Stage::cover: {
            std::FILE* fp = open_out(dir, "cover.csv", err);
            if (!fp) return false;
            std::fputs("coding,chain,elem,vertex,class,pi_u,pi_v\n", fp);
            for (size_t i = 0; i < d.cover.codings.size(); ++i) {
                const auto& c = d.cover.codings[i];
                std::fprintf(fp, "%zu,%d,%zu,%d,%d,%s,%s\n", i, c.chain_id, c.elem_index, c.vertex,
                             d.cover.cls[i], fmt_g(c.sh.pi.u).c_str(), fmt_g(c.sh.pi.v).c_str());
            }
            std::fclose(fp);
            fp = open_out(dir, "zsets.txt", err);
            if (!fp) return false;
            for (const auto& [v, zs] : d.cover.Z) {
                std::fprintf(fp, "%d:", v);
                for (int c : zs) std::fprintf(fp, " %d", c);
                std::fputc('\n', fp);
            }
            std::fclose(fp);
            return true;
        }
        case Stage::refine: {
            std::FILE* fp = open_out(dir, "rectangles.csv", err);
            if (!fp) return false;
            std::fputs("class,rect,rep_u,rep_v\n", fp);
            for (int c = 0; c < d.cover.n_classes; ++c)
                std::fprintf(fp, "%d,%d,%s,%s\n", c, d.ref.rect_of_class[size_t(c)],
                             fmt_g(d.cover.rep[size_t(c)].u).c_str(),
                             fmt_g(d.cover.rep[size_t(c)].v).c_str());
            std::fclose(fp);
            return true;
        }
        case Stage::shift: {
            std::FILE* fp = open_out(dir, "hat_edges.txt", err);
            if (!fp) return false;
            for (const auto& [e, w] : d.shift.witnesses) {
                std::fprintf(fp, "%d %d ", e.first, e.second);
                for (auto [a, b] : w) std::fprintf(fp, "(%d,%d)", a, b);
                std::fputc('\n', fp);
            }
            std::fclose(fp);
            return true;
        }
        case Stage::count: {
            std::FILE* fp = open_out(dir, "loops.csv", err);
            if (!fp) return false;
            std::fputs("n,count\n", fp);
            for (size_t n = 0; n < d.loop_counts.size(); ++n)
                std::fprintf(fp, "%zu,%llu\n", n + 1, d.loop_counts[n]);
            std::fclose(fp);
            fp = open_out(dir, "periodic.csv", err);
            if (!fp) return false;
            std::fputs("period,u,v,residual,converged\n", fp);
            for (const auto& pp : d.periodic)
                std::fprintf(fp, "%d,%s,%s,%s,%d\n", pp.period, fmt_g(pp.x.u).c_str(),
                             fmt_g(pp.x.v).c_str(), fmt_g(pp.residual).c_str(),
                             int(pp.converged));
            std::fclose(fp);
            return true;
        }
    }
    err = "unknown stage";
    return false;
}

std::string report_json(const PipelineData& d) {
    nlohmann::ordered_json j;
    j["config"]["map"] = d.cfg.map;
    j["config"]["chi"] = d.cfg.chi;
    j["config"]["eps"] = d.cfg.eps;
    j["config"]["rng_seed"] = d.cfg.rng_seed;
    j["reached"] = stage_name(d.reached);
    if (!d.error.empty()) j["error"] = d.error;

    for (const auto& c : d.ledger)
        j["epsilon_ledger"][c.name] = {{"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok},
                                       {"required", c.required}};

    size_t pts = 0, acc = 0, valid = 0;
    for (const auto& o : d.orbits) {
        valid += o.valid;
        for (const auto& p : o.pts) {
            pts++;
            acc += p.ok;
        }
    }
    j["sample"] = {{"orbits", d.orbits.size()}, {"valid_orbits", valid},
                   {"points", pts}, {"accepted_points", acc}};
    if (int(d.reached) >= int(Stage::alphabet))
        j["alphabet"] = {{"entries", d.alphabet.entries.size()},
                         {"assigned", d.alphabet.assignment.size()}};
    if (int(d.reached) >= int(Stage::chains)) {
        size_t edges = 0, maxdeg = 0;
        for (const auto& s : d.graph.succ) {
            edges += s.size();
            maxdeg = std::max(maxdeg, s.size());
        }
        j["graph"] = {{"chains", d.chains.size()}, {"vertices", d.graph.vertices.size()},
                      {"edges", edges}, {"max_out_degree", maxdeg},
                      {"pruned", d.graph.n_pruned}, {"scc", d.graph.n_scc}};
    }
    if (int(d.reached) >= int(Stage::cover))
        j["cover"] = {{"codings", d.cover.codings.size()}, {"classes", d.cover.n_classes},
                      {"z_sets", d.cover.Z.size()}, {"transitions", d.cover.transitions.size()}};
    if (int(d.reached) >= int(Stage::refine))
        j["refine"] = {{"rectangles", d.ref.rects.size()},
                       {"disjoint", d.ref.disjoint_cover}, {"subordinate", d.ref.subordinate},
                       {"markov_checked", d.markov.checked}, {"markov_failures", d.markov.failures},
                       {"markov_worst_gap", d.markov.worst_gap}};
    if (int(d.reached) >= int(Stage::shift))
        j["shift"] = {{"states", d.shift.n_states}, {"edges", d.shift.witnesses.size()}};
    if (int(d.reached) >= int(Stage::count)) {
        j["count"]["loops"] = d.loop_counts;
        j["count"]["gurevich_entropy"] = d.entropy.h;
        j["count"]["entropy_points"] = d.entropy.n_used;
        size_t conv = 0;
        for (const auto& pp : d.periodic) conv += pp.converged;
        j["count"]["periodic_orbits"] = d.periodic.size();
        j["count"]["periodic_converged"] = conv;
        j["count"]["preimage_bound"] = d.preimage.bound;
    }
    return j.dump(2) + "\n";
}

std::string render_svg(const PipelineData& d, double fiber_scale) {
    std::ostringstream os;
    const int S = 800, M = 40;
    auto px = [&](double u) { return M + u * S; };
    auto py = [&](double v) { return M + (1.0 - v) * S; };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S + 2 * M << "\" height=\""
       << S + 2 * M + 30 << "\">\n";
    os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << S << "\" height=\"" << S
       << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        double v = t / 4.0;
        os << "<text x=\"" << px(v) - 8 << "\" y=\"" << S + M + 16 << "\" font-size=\"12\">"
           << v << "</text>\n";
        os << "<text x=\"" << M - 30 << "\" y=\"" << py(v) + 4 << "\" font-size=\"12\">" << v
           << "</text>\n";
    }

    int nrect = int(d.ref.rects.size());
    auto color = [&](int r) {
        int hue = nrect > 0 ? (r * 360) / std::max(nrect, 1) : 0;
        return "hsl(" + std::to_string(hue) + ",70%,45%)";
    };
    // one glyph per class, colored by rectangle; fibers drawn exaggerated
    for (int c = 0; c < d.cover.n_classes; ++c) {
        int r = c < int(d.ref.rect_of_class.size()) ? d.ref.rect_of_class[size_t(c)] : -1;
        TorusPoint p = d.cover.rep[size_t(c)];
        os << "<rect x=\"" << px(p.u) - 3 << "\" y=\"" << py(p.v) - 3
           << "\" width=\"6\" height=\"6\" fill=\"" << (r >= 0 ? color(r) : "gray") << "\"/>\n";
        int cd = d.cover.class_members[size_t(c)].empty()
                     ? -1
                     : d.cover.class_members[size_t(c)][0];
        if (cd < 0) continue;
        const Coding& co = d.cover.codings[size_t(cd)];
        for (const RepresentedCurve* cv : {&co.sh.Vu, &co.sh.Vs}) {
            if (!cv->ok) continue;
            os << "<polyline fill=\"none\" stroke=\"" << (cv->kind == 'u' ? "red" : "blue")
               << "\" stroke-width=\"1\" points=\"";
            for (int i = 0; i <= 16; ++i) {
                double t = -cv->q + 2.0 * cv->q * i / 16.0;
                Vec2 w = co.chart.C.C * cv->point(t);
                os << px(p.u + w.x * fiber_scale) << "," << py(p.v + w.y * fiber_scale) << " ";
            }
            os << "\"/>\n";
        }
    }
    os << "<text x=\"" << M << "\" y=\"" << S + 2 * M + 20 << "\" font-size=\"12\">"
       << "u-fibers red, s-fibers blue, exaggerated x" << fmt_g(fiber_scale)
       << "; squares colored by rectangle (" << nrect << " rectangles)</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace torcode
