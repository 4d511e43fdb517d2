#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "maxbandit/instance.hpp"

namespace maxbandit::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_input = 2,
    exit_domain = 3,
    exit_safety_cap = 4,
    exit_golden_mismatch = 5,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The two reference instances: |K| = 10^4, G_*(eps) = A eps on [0, 1]. In the
/// first the single best arm has maximum 0.9 and the rest 0.1; the second swaps them.
std::shared_ptr<const BanditInstance> reference_instance(int which, double A = 0.01);

struct GoldenCheck {
    std::string name;
    double golden = 0.0;
    /// Significant figures the golden is stated with.
    int digits = 3;
    double value = 0.0;
    bool pass = false;
};

/// value rounded or truncated to min(3, digits) significant figures equals golden.
bool matches_golden(double value, double golden, int digits);

std::vector<GoldenCheck> reproduce_examples(double A = 0.01);

}  // namespace maxbandit::cli
