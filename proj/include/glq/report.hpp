#pragma once

// Uniform result type for the verification suites. Every identity that a
// suite checks becomes one entry: a stable id, the citation tag of the rule
// table or law it exercises, and the rendered residual when it fails.
// Failures never throw; callers inspect ok().

#include <string>
#include <vector>

#include "glq/rewrite.hpp"

namespace glq {

struct CheckEntry {
    std::string id;
    std::string cite;
    bool pass = true;
    std::string residual;  // empty on pass
};

class CheckReport {
  public:
    CheckReport(std::string suite, CalculusConfig cfg)
        : suite_(std::move(suite)), cfg_(cfg) {}

    const std::string& suite() const { return suite_; }
    const CalculusConfig& config() const { return cfg_; }
    const std::vector<CheckEntry>& entries() const { return entries_; }

    void add(std::string id, std::string cite, bool pass, std::string residual = "") {
        entries_.push_back({std::move(id), std::move(cite), pass,
                            pass ? std::string() : std::move(residual)});
    }
    void merge(const CheckReport& other) {
        entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
    }

    int passed() const {
        int n = 0;
        for (const auto& e : entries_) n += e.pass ? 1 : 0;
        return n;
    }
    int failed() const { return static_cast<int>(entries_.size()) - passed(); }
    bool ok() const { return failed() == 0; }

    // First failing entry, for terse diagnostics.
    const CheckEntry* first_failure() const {
        for (const auto& e : entries_)
            if (!e.pass) return &e;
        return nullptr;
    }

  private:
    std::string suite_;
    CalculusConfig cfg_;
    std::vector<CheckEntry> entries_;
};

inline std::string to_text(const CheckReport& r) {
    std::string s = "suite " + r.suite() + " (" + r.config().describe() + ")\n";
    for (const auto& e : r.entries()) {
        s += std::string(e.pass ? "  pass  " : "  FAIL  ") + e.id + " [" + e.cite + "]";
        if (!e.pass && !e.residual.empty()) s += "\n        residual: " + e.residual;
        s += "\n";
    }
    s += "  " + std::to_string(r.passed()) + " passed, " + std::to_string(r.failed()) +
         " failed\n";
    return s;
}

}  // namespace glq
