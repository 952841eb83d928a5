#include <cstdio>

#include "torcode/pipeline.hpp"

// Acceptance gate: one PASS/FAIL line per criterion, exit 0 only if all pass,
// 1 otherwise. Runs the full pipeline at the default configuration plus the
// extra per-criterion measurement suites.

int main() {
    torcode::PipelineConfig cfg;
    auto results = torcode::run_acceptance(cfg);
    int failed = 0;
    for (const auto& c : results) {
        std::printf("%s  %2d %-28s %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    c.detail.c_str());
        if (!c.pass) failed++;
    }
    std::printf("%d/%zu criteria passed\n", int(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
