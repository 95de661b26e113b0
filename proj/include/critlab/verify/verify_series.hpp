#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "critlab/exactseries/truncated_series.hpp"

namespace critlab {

enum class CheckStatus { pass, fail, skipped };

struct SeriesCheck {
    std::string name;
    std::string expected;
    std::string computed;
    CheckStatus status = CheckStatus::pass;
};

// Adds delta to the t^power coefficient of Y(i, j), 0-based, before the spectral
// pipeline runs.  Only for exercising the checks.
struct YPerturbation {
    int i = 0, j = 0, power = 0;
    long delta = 1;
};

struct VerifyOptions {
    int order = kDefaultOrder;
    std::optional<YPerturbation> perturb;
};

struct VerifyReport {
    int order = kDefaultOrder;
    std::array<int, 4> lambda_precision{};  // certified absolute precision per eigenvalue
    std::array<int, 4> symmetric{};
    std::vector<SeriesCheck> checks;

    bool all_pass() const;
    int count(CheckStatus s) const;
};

// Every exact-coefficient check against the displayed tables.  Coefficients the
// chosen order cannot certify are reported as skipped; order thresholds drop by
// kDefaultOrder - order below the default.
VerifyReport verify_series(const VerifyOptions& opt = {});

const char* to_string(CheckStatus s);

}  // namespace critlab
