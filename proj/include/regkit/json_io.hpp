#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "regkit/engine.hpp"
#include "regkit/graphreg.hpp"

namespace regkit {

using Json = nlohmann::ordered_json;

/// Serialize with fixed key order (insertion order of the tree) and every
/// floating-point number printed with 17 significant digits, so identical
/// trees produce identical bytes.
void write_json(std::ostream& out, const Json& j, int indent = 2);
std::string json_to_string(const Json& j, int indent = 2);

/// Engine trace in its wire schema:
/// {mode, epsilon, f_spec, rounds: [{potential_before, potential_after,
///  atoms_added, rank_after, q_magnitude}], k_witness, halting_certificate}
Json trace_to_json(const RegularityResult& result);

Json partition_to_json(const Partition& p); // exceptional part first when present
Json report_to_json(const DiscrepancyReport& report);
Json checks_to_json(const std::vector<CheckResult>& checks);

} // namespace regkit
