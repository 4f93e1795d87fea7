#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rackcode/code_model.hpp"
#include "rackcode/gf.hpp"

namespace rackcode {

// All node and rack indices in this module are 0-based.

/// Marker returned by min_distance when the code has no nonzero codeword.
constexpr std::size_t kInfiniteDistance = std::numeric_limits<std::size_t>::max();

/// Minimum Hamming weight over nonzero vectors in the right kernel of h;
/// failure sets strictly smaller than this are always locally repairable.
std::size_t min_distance(const Matrix& h, uint64_t cap = kDefaultSpanCap);

/// Supports (with j removed) of all vectors spanned by the rows of h plus the
/// optional vector r that are nonzero at position j. Pass an empty Vec for
/// "no extra vector". Deduplicated.
std::set<std::set<std::size_t>> repair_groups(const Matrix& h, const Vec& r, std::size_t j,
                                              uint64_t cap = kDefaultSpanCap);

struct FailurePattern {
    std::size_t rack = 0;
    std::set<std::size_t> failed;
};

/// Search preferences for the planners. Pinned fields restrict the search to
/// exact matches; force_tau applies to plans that use helper racks (a plan
/// that degenerates to pure intra-rack repair carries no tau at all).
struct PlanPolicy {
    std::optional<Vec> force_r;
    std::optional<std::set<std::size_t>> force_beta;
    std::optional<std::set<std::size_t>> force_tau;
    bool allow_degenerate = true;  // permit r = 0 (pure intra) in inter planning
};

/// Repairs node `node` of a rack from surviving nodes of the same rack:
/// X[rack][node] = sum over n in beta of coeffs[n] * X[rack][n].
struct IntraRepairPlan {
    std::size_t rack = 0;
    std::size_t node = 0;
    std::set<std::size_t> beta;
    std::map<std::size_t, uint16_t> coeffs;
};

/// Repairs node `node` of rack `rack` using helper racks tau:
/// X[rack][node] = sum_{m in tau} sum_{s in mu} d[m][s] X[m][s]
///              + sum_{n in beta} c[n] X[rack][n].
/// r is the inter-parity combination behind the helper sums (mu = support(r));
/// r empty/zero means the plan degenerated to intra-rack repair.
struct InterRepairPlan {
    std::size_t rack = 0;
    std::size_t node = 0;
    Vec r;
    std::set<std::size_t> mu;
    std::set<std::size_t> beta;
    std::set<std::size_t> tau;
    std::map<std::size_t, uint16_t> coeffs_c;
    Matrix coeffs_d;  // M x N, zero outside tau x mu

    bool degenerate() const { return is_zero(r); }
};

std::optional<IntraRepairPlan> try_plan_intra_repair(const Matrix& h,
                                                     const std::set<std::size_t>& gamma,
                                                     std::size_t j,
                                                     const PlanPolicy& policy = {},
                                                     uint64_t cap = kDefaultSpanCap);

/// Throws NoLocalGroup when every repair group intersects gamma.
IntraRepairPlan plan_intra_repair(const Matrix& h, const std::set<std::size_t>& gamma,
                                  std::size_t j, const PlanPolicy& policy = {},
                                  uint64_t cap = kDefaultSpanCap);

std::optional<InterRepairPlan> try_plan_inter_repair(const CodeSpec& spec, std::size_t rack,
                                                     const std::set<std::size_t>& gamma,
                                                     std::size_t j,
                                                     const PlanPolicy& policy = {},
                                                     uint64_t cap = kDefaultSpanCap);

/// Throws Unrepairable when no (r, beta, tau) combination works.
InterRepairPlan plan_inter_repair(const CodeSpec& spec, std::size_t rack,
                                  const std::set<std::size_t>& gamma, std::size_t j,
                                  const PlanPolicy& policy = {},
                                  uint64_t cap = kDefaultSpanCap);

/// Stored symbols with an explicit presence mask; erased cells have no value.
struct ErasedMatrix {
    Matrix values;
    std::vector<uint8_t> present;  // racks x nodes, row-major

    static ErasedMatrix erase(const Matrix& x, std::size_t rack,
                              const std::set<std::size_t>& nodes);
    bool is_present(std::size_t rack, std::size_t node) const {
        return present[rack * values.cols() + node] != 0;
    }
    uint16_t value(std::size_t rack, std::size_t node) const {
        return values.at(rack, node);
    }
    void restore(std::size_t rack, std::size_t node, uint16_t v) {
        values.at(rack, node) = v;
        present[rack * values.cols() + node] = 1;
    }
};

/// Throws MissingHelperSymbol if the plan references an erased symbol.
uint16_t execute_repair(const ErasedMatrix& observed, const IntraRepairPlan& plan);
uint16_t execute_repair(const ErasedMatrix& observed, const InterRepairPlan& plan);

struct CostReport {
    uint64_t theta_intra = 0;  // actual within-rack symbol transmissions
    uint64_t theta_inter = 0;  // actual across-rack symbol transmissions
    uint64_t bound_intra = 0;  // |tau| |union mu| + |union beta| + |gamma|
    uint64_t bound_inter = 0;  // |tau| dim<r_j>
};

/// Per-node transmission accounting for a standalone repair of that node:
/// intra = |beta| + |mu||tau| + 1, inter = |tau| (helper-rack sends).
struct NodeCost {
    std::size_t node = 0;
    bool used_helpers = false;
    uint64_t intra = 0;
    uint64_t inter = 0;
};

NodeCost plan_cost(const IntraRepairPlan& plan);
NodeCost plan_cost(const InterRepairPlan& plan);

struct RepairSchedule {
    std::set<std::size_t> gamma;
    std::set<std::size_t> alpha;  // nodes repaired intra-rack after the helper phase
    std::set<std::size_t> tau;    // shared helper racks (empty when unused)
    std::vector<InterRepairPlan> inter;  // for gamma \ alpha, ascending node order
    std::vector<IntraRepairPlan> intra;  // for alpha, ascending node order
    std::vector<NodeCost> per_node;
    CostReport cost;
};

/// Bound formulas evaluated for a given plan set and (gamma, alpha) split.
CostReport cost_bounds(const std::vector<InterRepairPlan>& inter,
                       const std::vector<IntraRepairPlan>& intra,
                       const std::set<std::size_t>& gamma,
                       const std::set<std::size_t>& alpha);

/// Repairs every node in failure.failed: pure intra when the failure count is
/// below the minimum distance of h, otherwise helper-rack repair for gamma
/// minus a chosen alpha of size Dist(h) - 1 followed by intra repair of alpha.
/// Throws Unrepairable when no alpha admits a full schedule.
RepairSchedule repair_all(const CodeSpec& spec, const FailurePattern& failure,
                          const PlanPolicy& policy = {}, uint64_t cap = kDefaultSpanCap);

}  // namespace rackcode
