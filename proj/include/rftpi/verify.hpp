#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Oracle-backed verification suites shared by the `verify` CLI command and
// the acceptance tests.

namespace rftpi {

struct SuiteReport {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string worst_case;  // parameter set at the maximum error
};

SuiteReport run_oracle_equivalence_suite();
SuiteReport run_steady_state_suite(std::uint64_t seed = 42, int n_sets = 100);
SuiteReport run_purity_suite(std::uint64_t seed = 42, int n_sets = 100);
SuiteReport run_limit_reduction_suite(std::uint64_t seed = 42, int n_triples = 1000);
SuiteReport run_g1_identity_suite(std::uint64_t seed = 42, int n_sets = 100);

std::vector<SuiteReport> run_all_suites(std::uint64_t seed = 42);

}  // namespace rftpi
