#pragma once

#include <stdexcept>
#include <string>

namespace vqe {

// Qubit/orbital count mismatches between operands.
struct dimension_error : std::runtime_error {
    explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition was violated (non-hermitian input, bad angle range, ...).
struct contract_error : std::runtime_error {
    explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text. Carries a 1-based line number when known.
struct parse_error : std::runtime_error {
    parse_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_number(line) {}
    int line_number;
};

// Problem size exceeds what dense simulation supports.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// ADAPT selection cannot proceed: every pool gradient vanishes.
struct stalled_pool_error : std::runtime_error {
    explicit stalled_pool_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vqe
