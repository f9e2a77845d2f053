#pragma once

#include <string>

#include "cansys/hamiltonian.hpp"

namespace cansys {

/// Parses a Hamiltonian document. Unknown keys and malformed input raise
/// InputError with a message naming the offending key.
[[nodiscard]] HamiltonianSpec parse_spec(const std::string& json_text);

/// Serialises a spec to the same document format (round-trips through parse_spec).
[[nodiscard]] std::string spec_to_json(const HamiltonianSpec& spec, int indent = 2);

}  // namespace cansys
