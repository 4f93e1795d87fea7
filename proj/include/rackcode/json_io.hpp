#pragma once

#include <json.hpp>

#include <optional>

#include "rackcode/code_model.hpp"
#include "rackcode/enumerator.hpp"
#include "rackcode/lp_bounds.hpp"
#include "rackcode/repair.hpp"

namespace rackcode {

using Json = nlohmann::json;

// User-facing JSON uses 1-based node and rack indices; everything in-process
// is 0-based. Matrices serialize as row-major arrays of arrays of canonical
// residues (non-negative integers below q).

constexpr uint64_t kDefaultSeed = 24041;

Json matrix_to_json(const Matrix& m);
/// `cols` disambiguates empty matrices; entries outside [0, q) are rejected.
Matrix matrix_from_json(const Gf& f, const Json& j, std::size_t cols);

/// {"q": int, "M": int, "N": int, "H": [[int]], "K": [[int]], "G": [[int]]}
CodeSpec spec_from_json(const Json& j);
Json spec_to_json(const CodeSpec& spec);

/// A repair request: which rack, which nodes failed, optionally one target
/// node to plan for (instead of a full schedule), optional pinned choices.
struct Scenario {
    FailurePattern failure;
    std::optional<std::size_t> target;
    PlanPolicy policy;
    uint64_t seed = kDefaultSeed;
};

/// {"rack": 1, "failed": [..], "target": 1?, "seed": n?,
///  "policy": {"r": [..], "beta": [..], "tau": [..], "allow_degenerate": bool}?}
Scenario scenario_from_json(const Json& j, const CodeSpec& spec);

Json plan_to_json(const IntraRepairPlan& plan);
Json plan_to_json(const InterRepairPlan& plan);
Json schedule_to_json(const RepairSchedule& sched);
Json cost_to_json(const CostReport& cost);

/// {"N":, "q":, "total":, "entries": [{"w": [..], "s": [..], "count": n}]}
Json enumerator_to_json(const EnumeratorTable& table);

Json validation_to_json(const ValidationReport& rep);
Json cert_to_json(const CertReport& rep);
Json bound_report_to_json(const BoundReport& rep);

}  // namespace rackcode
