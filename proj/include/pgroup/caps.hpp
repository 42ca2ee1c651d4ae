#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pgroup {

/// Thrown when an exact computation would exceed a configured resource cap.
/// Callers that treat caps as skips (the theorem harness) catch this type;
/// nothing in the library ever falls back to sampling.
class cap_exceeded : public std::runtime_error {
public:
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Resource limits for the exact algorithms. All checks are refused, never
/// approximated, when a cap is hit.
struct Caps {
    std::uint64_t max_order = 1'000'000;         // hard cap on group order
    std::uint64_t table_order = 4096;            // dense-table materialization cap
    std::uint64_t subgroup_enum_order = 729;     // full subgroup enumeration cap
    std::uint64_t tuple_cap = 10'000'000;        // exhaustive verbal-subgroup tuples
    std::uint64_t regular_pair_cap = 1'000'000;  // regularity pair scans
    std::uint64_t assoc_exhaustive_order = 300;  // associativity: exhaustive below, sampled above
};

inline const Caps& default_caps() {
    static const Caps caps{};
    return caps;
}

}  // namespace pgroup
