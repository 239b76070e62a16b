#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace steinlab::selftest {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the full acceptance suite, writing per-criterion artifacts (CSV plus a
// summary.json) into out_dir. Artifacts are byte-deterministic for a fixed
// seed. Does not write the run manifest; that is the CLI's job.
std::vector<CriterionResult> run_all(const std::string& out_dir, std::uint64_t seed);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace steinlab::selftest
