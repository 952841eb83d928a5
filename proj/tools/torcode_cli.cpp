#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "torcode.h"

// Exit codes: 0 success, 1 acceptance failure, 2 configuration error,
// 3 stage error. Stage verbs run the pipeline up to that stage and write the
// stage artifacts; `all` is shorthand for `count`.

namespace {

struct CommonOpts {
    std::string config;
    std::vector<std::string> sets;
    bool report = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "key=value config file");
    cmd->add_option("--set", o.sets, "override one option, key=value (repeatable)");
    cmd->add_flag("--report", o.report, "print the JSON report on success");
}

int apply_options(tc_run* r, const CommonOpts& o) {
    if (!o.config.empty() && tc_load_config(r, o.config.c_str()) != TC_OK) {
        std::fprintf(stderr, "config error: %s\n", tc_last_error(r));
        return TC_CONFIG_ERROR;
    }
    for (const auto& kv : o.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "config error: --set expects key=value, got '%s'\n", kv.c_str());
            return TC_CONFIG_ERROR;
        }
        if (tc_set(r, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()) != TC_OK) {
            std::fprintf(stderr, "config error: %s\n", tc_last_error(r));
            return TC_CONFIG_ERROR;
        }
    }
    return TC_OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"countable Markov partitions and symbolic codings for hyperbolic torus maps"};
    app.require_subcommand(1);

    const char* stage_verbs[] = {"sample", "reduce", "alphabet", "chains",
                                 "cover",  "refine", "shift",    "count"};
    struct Verb {
        CLI::App* cmd;
        CommonOpts opts;
        std::string stage;  // empty for check/plot
    };
    std::vector<Verb> verbs;
    verbs.reserve(16);
    for (const char* s : stage_verbs) {
        verbs.push_back({app.add_subcommand(s, std::string("run the pipeline through ") + s), {}, s});
        add_common(verbs.back().cmd, verbs.back().opts);
    }
    verbs.push_back({app.add_subcommand("all", "run the full pipeline"), {}, "count"});
    add_common(verbs.back().cmd, verbs.back().opts);

    Verb check{app.add_subcommand("check", "run the acceptance criteria"), {}, ""};
    add_common(check.cmd, check.opts);

    Verb plot{app.add_subcommand("plot", "render the partition as SVG"), {}, ""};
    add_common(plot.cmd, plot.opts);
    std::string svg_path;
    plot.cmd->add_option("-o,--output", svg_path, "write the SVG here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return TC_CONFIG_ERROR;
    }

    tc_run* run = tc_run_new();
    if (!run) {
        std::fprintf(stderr, "out of memory\n");
        return TC_STAGE_ERROR;
    }
    int rc = TC_OK;

    if (check.cmd->parsed()) {
        rc = apply_options(run, check.opts);
        if (rc == TC_OK) {
            const char* text = nullptr;
            rc = tc_acceptance(run, &text);
            if (text) std::fputs(text, stdout);
        }
    } else if (plot.cmd->parsed()) {
        rc = apply_options(run, plot.opts);
        if (rc == TC_OK) rc = tc_run_stage(run, "refine");
        if (rc == TC_OK) {
            const char* svg = tc_render_svg(run);
            if (!svg) {
                std::fprintf(stderr, "stage error: %s\n", tc_last_error(run));
                rc = TC_STAGE_ERROR;
            } else if (svg_path.empty()) {
                std::fputs(svg, stdout);
            } else {
                std::ofstream out(svg_path);
                out << svg;
                if (!out) {
                    std::fprintf(stderr, "cannot write %s\n", svg_path.c_str());
                    rc = TC_STAGE_ERROR;
                }
            }
        } else {
            std::fprintf(stderr, "%s\n", tc_last_error(run));
        }
    } else {
        for (auto& v : verbs) {
            if (!v.cmd->parsed()) continue;
            rc = apply_options(run, v.opts);
            if (rc == TC_OK) {
                rc = tc_run_stage(run, v.stage.c_str());
                if (rc != TC_OK)
                    std::fprintf(stderr, "%s\n", tc_last_error(run));
                else if (v.opts.report)
                    std::fputs(tc_report_json(run), stdout);
                else
                    std::printf("ok %s\n", v.stage.c_str());
            }
            break;
        }
    }

    tc_run_free(run);
    return rc;
}
