// Acceptance gate: runs every verification criterion and prints one line per
// criterion.  Exits non-zero if any criterion fails.
#include <cstdio>

#include "hamloop/verify.hpp"

int main() {
    bool all_pass = true;
    for (const auto& r : hamloop::verify::run_all()) {
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
