#ifndef RISBO_ORACLES_HPP
#define RISBO_ORACLES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace risbo {

struct OracleResult {
    std::string name;
    bool passed = false;
    std::string detail;  // worst observed deviation or counterexample
};

/// Self-contained cross-checks of the numeric core against independent
/// reference computations: backprop vs central finite differences, the GP
/// posterior vs the explicit-inverse formulas, closed-form EI vs Monte Carlo,
/// GP interpolation at training points, and the exhaustive detector vs a
/// second brute-force loop.
std::vector<OracleResult> run_oracle_suite(std::uint64_t seed);

}  // namespace risbo

#endif
