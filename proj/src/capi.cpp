#include "torcode.h"

#include <cstdio>
#include <string>

#include "torcode/pipeline.hpp"

using namespace torcode;

struct tc_run {
    PipelineData data;
    std::string last_error;
    std::string scratch;  // backing store for returned strings
};

extern "C" {

tc_run* tc_run_new(void) {
    return new (std::nothrow) tc_run;
}

void tc_run_free(tc_run* r) {
    delete r;
}

int tc_set(tc_run* r, const char* key, const char* value) {
    if (!r || !key || !value) return TC_CONFIG_ERROR;
    if (r->data.started) {
        r->last_error = "options are fixed once a stage has run";
        return TC_CONFIG_ERROR;
    }
    std::string err;
    if (!set_option(r->data.cfg, key, value, err)) {
        r->last_error = err;
        return TC_CONFIG_ERROR;
    }
    return TC_OK;
}

int tc_load_config(tc_run* r, const char* path) {
    if (!r || !path) return TC_CONFIG_ERROR;
    if (r->data.started) {
        r->last_error = "options are fixed once a stage has run";
        return TC_CONFIG_ERROR;
    }
    std::string err;
    if (!load_config(r->data.cfg, path, err)) {
        r->last_error = err;
        return TC_CONFIG_ERROR;
    }
    return TC_OK;
}

const char* tc_config_text(tc_run* r) {
    if (!r) return "";
    r->scratch = config_text(r->data.cfg);
    return r->scratch.c_str();
}

int tc_run_stage(tc_run* r, const char* stage) {
    if (!r || !stage) return TC_CONFIG_ERROR;
    Stage s;
    if (!stage_from_name(stage, s)) {
        if (r) r->last_error = std::string("unknown stage: ") + stage;
        return TC_CONFIG_ERROR;
    }
    int rc = run_stages(r->data, s);
    if (rc != 0) {
        r->last_error = r->data.error;
        return rc;
    }
    std::string err;
    if (!write_artifacts(r->data, s, err)) {
        r->last_error = err;
        return TC_STAGE_ERROR;
    }
    return TC_OK;
}

const char* tc_report_json(tc_run* r) {
    if (!r) return "";
    r->scratch = report_json(r->data);
    return r->scratch.c_str();
}

const char* tc_render_svg(tc_run* r) {
    if (!r) return nullptr;
    if (r->data.reached < Stage::refine || !r->data.started) {
        int rc = run_stages(r->data, Stage::refine);
        if (rc != 0) {
            r->last_error = r->data.error;
            return nullptr;
        }
    }
    r->scratch = render_svg(r->data);
    return r->scratch.c_str();
}

int tc_acceptance(tc_run* r, const char** out_text) {
    if (!r) return TC_CONFIG_ERROR;
    auto results = run_acceptance(r->data.cfg);
    bool all = true;
    std::string text;
    for (const auto& c : results) {
        all = all && c.pass;
        text += c.pass ? "PASS " : "FAIL ";
        text += c.name;
        if (!c.detail.empty()) {
            text += "  ";
            text += c.detail;
        }
        text += '\n';
    }
    r->scratch = std::move(text);
    if (out_text) *out_text = r->scratch.c_str();
    return all ? TC_OK : TC_ACCEPT_FAIL;
}

const char* tc_last_error(tc_run* r) {
    return r ? r->last_error.c_str() : "";
}

}  // extern "C"
