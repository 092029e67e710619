#pragma once

#include <string>
#include <vector>

namespace qnlay {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string witness;  // empty when passed
};

/// Outcome of a validator: one entry per named check.
struct Report {
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    bool passed(const std::string& name) const {
        const auto* c = find(name);
        return c && c->passed;
    }

    void pass(std::string name) { checks.push_back({std::move(name), true, {}}); }
    void fail(std::string name, std::string witness) { checks.push_back({std::move(name), false, std::move(witness)}); }
    void record(std::string name, bool ok, std::string witness) {
        checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(witness)});
    }

    std::string summary() const {
        std::string s;
        for (const auto& c : checks) {
            s += (c.passed ? "PASS " : "FAIL ") + c.name;
            if (!c.passed) s += ": " + c.witness;
            s += '\n';
        }
        return s;
    }
};

}  // namespace qnlay
