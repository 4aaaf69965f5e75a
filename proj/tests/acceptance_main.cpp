// Acceptance harness: runs every criterion against the shipped corpus and
// prints one pass/fail line per criterion. Nonzero exit on any failure.

#include <cstdio>
#include <cstring>
#include <string>

#include "jacstab/acceptance.hpp"

int main(int argc, char** argv) {
    std::string corpus_dir = "corpus";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--corpus") == 0 && i + 1 < argc) {
            corpus_dir = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--corpus DIR]\n", argv[0]);
            return 2;
        }
    }

    const auto fixtures = jacstab::verify_corpus_dir(corpus_dir);
    if (!fixtures.pass()) {
        for (const auto& f : fixtures.findings)
            std::fprintf(stderr, "corpus: %s: %s\n", f.code.c_str(), f.detail.c_str());
        return 2;
    }
    const auto corpus = jacstab::load_corpus_dir(corpus_dir);

    int failures = 0;
    jacstab::run_acceptance(corpus, [&](const jacstab::CriterionResult& c) {
        if (c.budget_seconds > 0.0)
            std::printf("criterion %d (%s): %s (%.1fs, budget %.0fs)\n", c.index, c.name.c_str(),
                        c.pass() ? "PASS" : "FAIL", c.seconds, c.budget_seconds);
        else
            std::printf("criterion %d (%s): %s (%.1fs)\n", c.index, c.name.c_str(),
                        c.pass() ? "PASS" : "FAIL", c.seconds);
        std::fflush(stdout);
        if (!c.pass()) {
            ++failures;
            std::size_t shown = 0;
            for (const auto& f : c.findings) {
                if (++shown > 10) {
                    std::printf("  ... %zu more findings\n", c.findings.size() - 10);
                    break;
                }
                std::printf("  %s: %s\n", f.code.c_str(), f.detail.c_str());
            }
        }
    });
    return failures == 0 ? 0 : 1;
}
