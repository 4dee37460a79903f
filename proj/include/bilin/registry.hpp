#pragma once

#include <bilin/system.hpp>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace bilin {

struct CheckResult {
    bool pass = false;
    std::string detail;
};

struct Expectation {
    std::string description;
    std::function<CheckResult(const System&)> check;
};

struct RegistryEntry {
    std::string name;
    std::string summary;
    /// Canonical system file text.
    std::string text;
    std::vector<Expectation> expectations;

    System system() const { return parse_system(text); }
};

/// fibonacci, doubling, constant-n1, period3, signed-s, signed-coeff, open-problem.
const std::vector<RegistryEntry>& registry();

/// nullptr when unknown.
const RegistryEntry* find_entry(std::string_view name);

/// F_0 = 0, F_1 = 1.
mpz_class fibonacci_number(unsigned n);

} // namespace bilin
