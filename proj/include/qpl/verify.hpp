#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpl/diagrams.hpp"
#include "qpl/rng.hpp"

namespace qpl {

struct CheckResult {
    std::string name;
    double value = 0.0;      // worst observed error or statistic
    double tolerance = 0.0;  // pass iff value < tolerance
    bool passed = false;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const;
    /// First failing check, or nullptr.
    const CheckResult* first_failure() const;
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::optional<double> tolerance;  // replaces every check's tolerance when set
};

/// Names of the suites, in execution order.
const std::vector<std::string>& suite_names();

/// Runs one suite; DomainError for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyOptions& options = {});

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options = {});

/// A random Young diagram with n boxes: n steps that each add a box at a uniformly
/// chosen addable corner.
Partition random_partition(int n, StreamRng& rng);

}  // namespace qpl
