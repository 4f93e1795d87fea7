#include "rackcode/repair.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace rackcode {

namespace {

std::set<std::size_t> to_set(const std::vector<std::size_t>& v) {
    return std::set<std::size_t>(v.begin(), v.end());
}

bool intersects(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    for (std::size_t x : a)
        if (b.count(x)) return true;
    return false;
}

/// First canonical row-space vector per repair group of `m` (plus optional
/// extra vector r) at position j. Keys are the groups; values the vectors
/// that realize them, in row-space enumeration order.
std::map<std::set<std::size_t>, Vec> group_vectors(const Matrix& m, const Vec& r,
                                                   std::size_t j, uint64_t cap) {
    Matrix base = m;
    if (!r.empty() && !is_zero(r)) {
        Matrix extra(m.field(), 1, m.cols());
        extra.set_row(0, r);
        base = m.rows() > 0 ? m.vstack(extra) : extra;
    }
    std::map<std::set<std::size_t>, Vec> groups;
    for (const Vec& u : row_space(base, cap)) {
        if (u[j] == 0) continue;
        std::set<std::size_t> beta = to_set(support(u));
        beta.erase(j);
        groups.emplace(std::move(beta), u);
    }
    return groups;
}

Vec normalize_at(const Gf& f, const Vec& u, std::size_t j) {
    return scale_vec(f, f.inv(u[j]), u);
}

std::map<std::size_t, uint16_t> negated_coeffs(const Gf& f, const Vec& u,
                                               const std::set<std::size_t>& beta) {
    std::map<std::size_t, uint16_t> coeffs;
    for (std::size_t n : beta) coeffs[n] = f.neg(u[n]);
    return coeffs;
}

bool vec_in_row_space(const Matrix& m, const Vec& v) {
    if (is_zero(v)) return true;
    Matrix extra(m.field(), 1, v.size());
    extra.set_row(0, v);
    Matrix stacked = m.rows() > 0 ? m.vstack(extra) : extra;
    return rank(stacked) == rank(m);
}

/// Coefficient of the extra vector when u is decomposed over rows of m plus
/// the extra vector (u = y m + a r). Deterministic via the canonical solve.
uint16_t extra_coefficient(const Matrix& m, const Vec& r, const Vec& u) {
    const Gf& f = m.field();
    std::size_t n = u.size();
    Matrix system(f, n, m.rows() + 1);
    for (std::size_t c = 0; c < m.rows(); ++c)
        for (std::size_t row = 0; row < n; ++row) system.at(row, c) = m.at(c, row);
    for (std::size_t row = 0; row < n; ++row) system.at(row, m.rows()) = r[row];
    SolveResult sol = solve(system, u);
    return sol.particular[m.rows()];
}

}  // namespace

std::size_t min_distance(const Matrix& h, uint64_t cap) {
    Matrix kernel = kernel_basis(h);
    if (kernel.rows() == 0) return kInfiniteDistance;
    RowSpace space = [&]() -> RowSpace {
        try {
            return row_space(kernel, cap);
        } catch (const SpanTooLarge& e) {
            throw CodebookTooLarge(e.what());
        }
    }();
    std::size_t best = kInfiniteDistance;
    for (const Vec& v : space) {
        std::size_t w = support(v).size();
        if (w > 0 && w < best) best = w;
    }
    return best;
}

std::set<std::set<std::size_t>> repair_groups(const Matrix& h, const Vec& r, std::size_t j,
                                              uint64_t cap) {
    std::set<std::set<std::size_t>> out;
    for (const auto& [beta, u] : group_vectors(h, r, j, cap)) out.insert(beta);
    return out;
}

std::optional<IntraRepairPlan> try_plan_intra_repair(const Matrix& h,
                                                     const std::set<std::size_t>& gamma,
                                                     std::size_t j, const PlanPolicy& policy,
                                                     uint64_t cap) {
    if (!gamma.count(j)) throw Error("node to repair must be in the failed set");
    const Gf& f = h.field();

    std::map<std::set<std::size_t>, Vec> groups = group_vectors(h, Vec{}, j, cap);
    const std::set<std::size_t>* best = nullptr;
    const Vec* best_u = nullptr;
    for (const auto& [beta, u] : groups) {
        if (intersects(beta, gamma)) continue;
        if (policy.force_beta && beta != *policy.force_beta) continue;
        if (!best || std::make_pair(beta.size(), beta) < std::make_pair(best->size(), *best)) {
            best = &beta;
            best_u = &u;
        }
    }
    if (!best) return std::nullopt;

    Vec u = normalize_at(f, *best_u, j);
    IntraRepairPlan plan;
    plan.rack = 0;
    plan.node = j;
    plan.beta = *best;
    plan.coeffs = negated_coeffs(f, u, *best);
    return plan;
}

IntraRepairPlan plan_intra_repair(const Matrix& h, const std::set<std::size_t>& gamma,
                                  std::size_t j, const PlanPolicy& policy, uint64_t cap) {
    auto plan = try_plan_intra_repair(h, gamma, j, policy, cap);
    if (!plan) {
        throw NoLocalGroup("every repair group for node " + std::to_string(j + 1) +
                           " intersects the failed set");
    }
    return *plan;
}

std::optional<InterRepairPlan> try_plan_inter_repair(const CodeSpec& spec, std::size_t rack,
                                                     const std::set<std::size_t>& gamma,
                                                     std::size_t j, const PlanPolicy& policy,
                                                     uint64_t cap) {
    if (!gamma.count(j)) throw Error("node to repair must be in the failed set");
    if (rack >= spec.racks) throw Error("rack index out of range");
    const Gf& f = spec.field;
    const std::size_t n = spec.nodes;

    // helper-rack options: groups of G at the failed rack, with the canonical
    // vector realizing each
    std::map<std::set<std::size_t>, Vec> tau_options =
        group_vectors(spec.g, Vec{}, rack, cap);
    if (policy.force_tau) {
        std::map<std::set<std::size_t>, Vec> filtered;
        auto it = tau_options.find(*policy.force_tau);
        if (it != tau_options.end()) filtered.insert(*it);
        tau_options = std::move(filtered);
    }

    // candidate r vectors: zero (degenerate) plus one representative per
    // scalar class of the nonzero row space of K
    std::vector<Vec> r_candidates;
    bool forced_degenerate = false;
    if (policy.force_r) {
        if (!vec_in_row_space(spec.k, *policy.force_r))
            throw Error("forced r is not spanned by the rows of K");
        if (is_zero(*policy.force_r)) {
            forced_degenerate = true;
        } else {
            r_candidates.push_back(*policy.force_r);
        }
    } else {
        std::set<Vec> seen;
        for (const Vec& v : row_space(spec.k, cap)) {
            if (is_zero(v)) continue;
            std::size_t lead = support(v).front();
            Vec rep = scale_vec(f, f.inv(v[lead]), v);
            if (seen.insert(rep).second) r_candidates.push_back(rep);
        }
    }
    bool try_degenerate =
        forced_degenerate || (policy.allow_degenerate && !policy.force_r);

    struct Candidate {
        Vec r;  // empty for degenerate
        std::set<std::size_t> beta;
        Vec u;
        std::set<std::size_t> tau;  // ignored for degenerate
        std::size_t mu_size = 0;
        std::size_t order = 0;
    };
    std::optional<Candidate> best;
    auto objective = [](const Candidate& c) {
        return std::make_tuple(c.tau.size() * c.mu_size + c.beta.size(), c.tau.size(), c.beta,
                               c.tau, c.order);
    };
    auto consider = [&](Candidate cand) {
        if (!best || objective(cand) < objective(*best)) best = std::move(cand);
    };

    if (try_degenerate) {
        std::map<std::set<std::size_t>, Vec> groups = group_vectors(spec.h, Vec{}, j, cap);
        for (const auto& [beta, u] : groups) {
            if (intersects(beta, gamma)) continue;
            if (policy.force_beta && beta != *policy.force_beta) continue;
            consider(Candidate{Vec{}, beta, u, {}, 0, 0});
        }
    }
    for (std::size_t ri = 0; ri < r_candidates.size(); ++ri) {
        const Vec& r = r_candidates[ri];
        std::size_t mu_size = support(r).size();
        std::map<std::set<std::size_t>, Vec> groups = group_vectors(spec.h, r, j, cap);
        for (const auto& [beta, u] : groups) {
            if (intersects(beta, gamma)) continue;
            if (policy.force_beta && beta != *policy.force_beta) continue;
            for (const auto& [tau, g] : tau_options) {
                consider(Candidate{r, beta, u, tau, mu_size, ri + 1});
            }
        }
    }
    if (!best) return std::nullopt;

    InterRepairPlan plan;
    plan.rack = rack;
    plan.node = j;
    plan.beta = best->beta;
    plan.coeffs_d = Matrix(f, spec.racks, n);
    Vec u = normalize_at(f, best->u, j);
    plan.coeffs_c = negated_coeffs(f, u, best->beta);
    if (best->r.empty()) {
        plan.r = Vec(n, 0);
        return plan;  // pure intra-rack: no helper racks, d stays zero
    }
    plan.r = best->r;
    plan.mu = to_set(support(best->r));
    plan.tau = best->tau;
    uint16_t a = extra_coefficient(spec.h, plan.r, u);
    const Vec& g = tau_options.at(best->tau);
    Vec g_norm = normalize_at(f, g, rack);
    for (std::size_t m : plan.tau) {
        uint16_t v_m = f.neg(g_norm[m]);
        uint16_t av = f.mul(a, v_m);
        for (std::size_t s : plan.mu) {
            plan.coeffs_d.at(m, s) = f.mul(av, plan.r[s]);
        }
    }
    return plan;
}

InterRepairPlan plan_inter_repair(const CodeSpec& spec, std::size_t rack,
                                  const std::set<std::size_t>& gamma, std::size_t j,
                                  const PlanPolicy& policy, uint64_t cap) {
    auto plan = try_plan_inter_repair(spec, rack, gamma, j, policy, cap);
    if (!plan) {
        throw Unrepairable("no helper-rack repair combination for node " +
                           std::to_string(j + 1));
    }
    return *plan;
}

ErasedMatrix ErasedMatrix::erase(const Matrix& x, std::size_t rack,
                                 const std::set<std::size_t>& nodes) {
    ErasedMatrix out{x, std::vector<uint8_t>(x.rows() * x.cols(), 1)};
    for (std::size_t nidx : nodes) {
        out.values.at(rack, nidx) = 0;
        out.present[rack * x.cols() + nidx] = 0;
    }
    return out;
}

uint16_t execute_repair(const ErasedMatrix& observed, const IntraRepairPlan& plan) {
    const Gf& f = observed.values.field();
    uint32_t acc = 0;
    for (const auto& [nidx, coeff] : plan.coeffs) {
        if (!observed.is_present(plan.rack, nidx)) {
            throw MissingHelperSymbol("node " + std::to_string(nidx + 1) +
                                      " in the failed rack is erased");
        }
        acc = (acc + uint32_t(coeff) * observed.value(plan.rack, nidx)) % f.q();
    }
    return uint16_t(acc);
}

uint16_t execute_repair(const ErasedMatrix& observed, const InterRepairPlan& plan) {
    const Gf& f = observed.values.field();
    uint32_t acc = 0;
    for (const auto& [nidx, coeff] : plan.coeffs_c) {
        if (!observed.is_present(plan.rack, nidx)) {
            throw MissingHelperSymbol("node " + std::to_string(nidx + 1) +
                                      " in the failed rack is erased");
        }
        acc = (acc + uint32_t(coeff) * observed.value(plan.rack, nidx)) % f.q();
    }
    for (std::size_t m : plan.tau) {
        for (std::size_t s : plan.mu) {
            uint16_t coeff = plan.coeffs_d.at(m, s);
            if (coeff == 0) continue;
            if (!observed.is_present(m, s)) {
                throw MissingHelperSymbol("helper symbol (" + std::to_string(m + 1) + "," +
                                          std::to_string(s + 1) + ") is erased");
            }
            acc = (acc + uint32_t(coeff) * observed.value(m, s)) % f.q();
        }
    }
    return uint16_t(acc);
}

NodeCost plan_cost(const IntraRepairPlan& plan) {
    return NodeCost{plan.node, false, plan.beta.size() + 1, 0};
}

NodeCost plan_cost(const InterRepairPlan& plan) {
    NodeCost c;
    c.node = plan.node;
    c.used_helpers = !plan.degenerate();
    c.intra = plan.beta.size() + plan.mu.size() * plan.tau.size() + 1;
    c.inter = c.used_helpers ? plan.tau.size() : 0;
    return c;
}

CostReport cost_bounds(const std::vector<InterRepairPlan>& inter,
                       const std::vector<IntraRepairPlan>& intra,
                       const std::set<std::size_t>& gamma,
                       const std::set<std::size_t>& alpha) {
    CostReport rep;
    std::set<std::size_t> tau_used, mu_union, beta_union, beta_transmitted;
    std::vector<Vec> r_rows;
    for (const InterRepairPlan& p : inter) {
        if (!p.degenerate()) {
            tau_used.insert(p.tau.begin(), p.tau.end());
            mu_union.insert(p.mu.begin(), p.mu.end());
            r_rows.push_back(p.r);
        }
        beta_union.insert(p.beta.begin(), p.beta.end());
    }
    for (const IntraRepairPlan& p : intra) beta_union.insert(p.beta.begin(), p.beta.end());
    for (std::size_t nidx : beta_union)
        if (!gamma.count(nidx)) beta_transmitted.insert(nidx);

    std::size_t r_dim = 0;
    if (!r_rows.empty()) {
        Matrix rm(inter.front().coeffs_d.field(), r_rows.size(), r_rows.front().size());
        for (std::size_t i = 0; i < r_rows.size(); ++i) rm.set_row(i, r_rows[i]);
        r_dim = rank(rm);
    }

    rep.bound_intra = tau_used.size() * mu_union.size() + beta_union.size() + gamma.size();
    rep.bound_inter = tau_used.size() * r_dim;
    rep.theta_intra = tau_used.size() * mu_union.size() + beta_transmitted.size() + gamma.size();
    rep.theta_inter = tau_used.size() * r_dim;
    (void)alpha;
    return rep;
}

RepairSchedule repair_all(const CodeSpec& spec, const FailurePattern& failure,
                          const PlanPolicy& policy, uint64_t cap) {
    if (failure.failed.empty()) throw Error("failure pattern has no failed nodes");
    if (failure.rack >= spec.racks) throw Error("failed rack index out of range");
    for (std::size_t nidx : failure.failed) {
        if (nidx >= spec.nodes) throw Error("failed node index out of range");
    }
    const std::set<std::size_t>& gamma = failure.failed;

    RepairSchedule sched;
    sched.gamma = gamma;

    auto push_node_cost = [&sched](const InterRepairPlan& p) {
        sched.per_node.push_back(plan_cost(p));
    };
    auto push_intra_cost = [&sched](const IntraRepairPlan& p) {
        sched.per_node.push_back(plan_cost(p));
    };

    std::size_t dist = min_distance(spec.h, cap);
    if (dist == kInfiniteDistance || gamma.size() < dist) {
        for (std::size_t j : gamma) {
            IntraRepairPlan plan = plan_intra_repair(spec.h, gamma, j, PlanPolicy{}, cap);
            plan.rack = failure.rack;
            push_intra_cost(plan);
            sched.intra.push_back(std::move(plan));
        }
        sched.alpha = gamma;
        sched.cost = cost_bounds(sched.inter, sched.intra, gamma, sched.alpha);
        return sched;
    }

    // shared helper-rack choice: only |tau| enters the cost bounds, so the
    // smallest group wins; callers may pin it
    std::optional<std::set<std::size_t>> tau_star;
    if (policy.force_tau) {
        tau_star = *policy.force_tau;
    } else {
        for (const auto& [tau, g] : group_vectors(spec.g, Vec{}, failure.rack, cap)) {
            if (!tau_star || std::make_pair(tau.size(), tau) <
                                 std::make_pair(tau_star->size(), *tau_star)) {
                tau_star = tau;
            }
        }
    }

    std::vector<std::size_t> gamma_sorted(gamma.begin(), gamma.end());
    std::size_t alpha_size = dist - 1;
    std::vector<std::size_t> pick(alpha_size);
    for (std::size_t i = 0; i < alpha_size; ++i) pick[i] = i;

    auto advance = [&]() -> bool {
        // next combination in lexicographic order
        std::size_t k = alpha_size;
        while (k > 0) {
            --k;
            if (pick[k] + (alpha_size - k) < gamma_sorted.size()) {
                ++pick[k];
                for (std::size_t i = k + 1; i < alpha_size; ++i) pick[i] = pick[i - 1] + 1;
                return true;
            }
        }
        return false;
    };

    while (true) {
        std::set<std::size_t> alpha;
        for (std::size_t i : pick) alpha.insert(gamma_sorted[i]);

        std::vector<InterRepairPlan> inter;
        std::vector<IntraRepairPlan> intra;
        bool ok = true;
        for (std::size_t j : gamma) {
            if (alpha.count(j)) continue;
            PlanPolicy per_node;
            per_node.force_tau = tau_star;
            per_node.allow_degenerate = policy.allow_degenerate;
            auto plan = try_plan_inter_repair(spec, failure.rack, gamma, j, per_node, cap);
            if (!plan) {
                ok = false;
                break;
            }
            inter.push_back(std::move(*plan));
        }
        if (ok) {
            for (std::size_t j : alpha) {
                auto plan = try_plan_intra_repair(spec.h, alpha, j, PlanPolicy{}, cap);
                if (!plan) {
                    ok = false;
                    break;
                }
                plan->rack = failure.rack;
                intra.push_back(std::move(*plan));
            }
        }
        if (ok) {
            sched.alpha = alpha;
            sched.inter = std::move(inter);
            sched.intra = std::move(intra);
            for (const InterRepairPlan& p : sched.inter) {
                if (!p.degenerate()) sched.tau.insert(p.tau.begin(), p.tau.end());
                push_node_cost(p);
            }
            for (const IntraRepairPlan& p : sched.intra) push_intra_cost(p);
            sched.cost = cost_bounds(sched.inter, sched.intra, gamma, alpha);
            return sched;
        }
        if (!advance()) break;
    }
    throw Unrepairable("no split of the failed set admits a full repair schedule");
}

}  // namespace rackcode
