// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. Also reachable through `branchwalk verify`.
#include <cstring>
#include <iostream>

#include "branchwalk/verify.hpp"

#ifndef BRANCHWALK_FIXTURE_DIR
#define BRANCHWALK_FIXTURE_DIR "fixtures"
#endif

int main(int argc, char** argv) {
    branchwalk::VerifyOptions options;
    options.fixture_dir = BRANCHWALK_FIXTURE_DIR;
    options.threads = 2;
    options.progress = &std::cout;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fixtures") == 0 && i + 1 < argc)
            options.fixture_dir = argv[++i];
        else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
            options.threads = std::atoi(argv[++i]);
    }
    auto results = branchwalk::run_acceptance(options);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
