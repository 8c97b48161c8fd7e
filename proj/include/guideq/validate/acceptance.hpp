#pragma once

#include <functional>
#include <string>
#include <vector>

namespace guideq::validate {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // measured values against their targets
    double seconds = 0.0;
    double time_limit = 0.0;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds
    std::function<CriterionResult()> run;
};

/// The cross-module acceptance suite, in order. `threads` caps sweep
/// parallelism inside criteria that use it.
std::vector<Criterion> acceptance_suite(unsigned threads = 1);

/// Runs one criterion, timing it and turning exceptions into failures.
CriterionResult run_criterion(const Criterion& c);

/// "[PASS] 4 tunneling triple agreement (1.2 s): ..." style line.
std::string format_result(const CriterionResult& r);

}  // namespace guideq::validate
