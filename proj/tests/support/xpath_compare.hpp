#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace support {

struct OracleComparison {
    std::size_t documents = 0;
    std::size_t comparisons = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

/// Evaluates a fixed grammar-covering expression list plus
/// `random_per_doc` random expressions on `documents` seeded random documents
/// (at most 50 nodes each), with both the library evaluator and the oracle,
/// from the root and from one random element.
OracleComparison compare_with_oracle(std::size_t documents, std::size_t random_per_doc, std::uint32_t seed);

}  // namespace support
