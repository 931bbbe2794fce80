#pragma once

#include "bubble/f_oracle.hpp"
#include "bubble/fourier_engine.hpp"
#include "bubble/weyl_tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bubble {

// One numeric check: measured worst-case error against a fixed tolerance.
struct CheckLine {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool pass = false;
};

// K_{1/2} closed form, three-term recurrence on a grid of orders and arguments, profile ODE residuals.
std::vector<CheckLine> bessel_checks();

// Derivative and descent recursions of the profile moments on both sides, and the g = 1/2 closed forms.
std::vector<CheckLine> moment_recursion_checks();

// The (n, gamma) pairs at which engine and printed table are compared.
const std::vector<std::pair<int, Rational>>& table_sample_pairs();

struct ErrataEntry {
    int n = 0;
    Rational gamma;
    FKey key;
    Rational engine;
    Rational table;
    double unit = 0;  // |S^{n-1}| A1 B2
    std::optional<NumericValue> fourier, physical;
    // Relative gaps of each oracle to the engine and to the table.
    bool fourier_sides_with_engine() const;
    bool physical_sides_with_engine() const;
};

struct TableComparison {
    int compared = 0;
    std::vector<ErrataEntry> mismatches;
};

// Every printed key at every sample pair; mismatches optionally adjudicated by both oracles.
TableComparison compare_with_table(bool adjudicate);

struct IdentityRun {
    int dim = 0;
    int trials = 0;
    std::vector<IdentityReport> rows;
    bool all_equal() const;
};

// verify_all_identities on tensors drawn from seeds derived from base_seed.
IdentityRun run_identities(int dim, int trials, std::uint64_t base_seed);

}  // namespace bubble
