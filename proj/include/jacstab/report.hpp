#pragma once

#include <string>
#include <vector>

namespace jacstab {

struct Finding {
    std::string code;    // short machine-readable kind, e.g. "chip-adding"
    std::string detail;  // human-readable description
    auto operator<=>(const Finding&) const = default;
};

// Result of a verification pass: pass == findings empty.
struct VerifyReport {
    std::vector<Finding> findings;

    bool pass() const { return findings.empty(); }
    void fail(std::string code, std::string detail) {
        findings.push_back({std::move(code), std::move(detail)});
    }
    void merge(const VerifyReport& other) {
        findings.insert(findings.end(), other.findings.begin(), other.findings.end());
    }
};

}  // namespace jacstab
