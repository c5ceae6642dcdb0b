#pragma once

#include <string>
#include <vector>

namespace optexec {

struct FigureCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct FigureOutput {
    std::vector<std::string> files;       // paths written (empty out_dir writes nothing)
    std::vector<FigureCheck> checks;      // qualitative self-checks

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Plot-ready CSV data for the demo parameter sets: basic-model rate
/// curves over a grid of constant (sigma, eta), four seeded signal-model
/// paths per (alpha0, theta) scenario, and seeded stochastic-volatility
/// paths.  Each emission is paired with a programmatic check of the
/// qualitative behavior the curves are meant to show (front-loading
/// ordering, signal sign effects, theta = 0 coincidence).
FigureOutput generate_figures(const std::string& out_dir);

}  // namespace optexec
