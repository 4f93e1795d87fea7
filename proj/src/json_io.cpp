#include "rackcode/json_io.hpp"

#include <string>

namespace rackcode {

namespace {

Json index_set_to_json(const std::set<std::size_t>& s) {
    Json out = Json::array();
    for (std::size_t v : s) out.push_back(v + 1);
    return out;
}

std::set<std::size_t> index_set_from_json(const Json& j, std::size_t limit,
                                          const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::set<std::size_t> out;
    for (const Json& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 1 ||
            v.get<unsigned long long>() > limit) {
            throw ParseError(std::string(what) + " entries must be integers in [1, " +
                             std::to_string(limit) + "]");
        }
        out.insert(std::size_t(v.get<unsigned long long>()) - 1);
    }
    return out;
}

Json coeffs_to_json(const std::map<std::size_t, uint16_t>& coeffs) {
    Json out = Json::object();
    for (const auto& [n, c] : coeffs) out[std::to_string(n + 1)] = c;
    return out;
}

Json vec_to_json(const Vec& v) {
    Json out = Json::array();
    for (uint16_t x : v) out.push_back(x);
    return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Gf& f, const Json& j, std::size_t cols) {
    if (!j.is_array()) throw ParseError("matrix must be an array of rows");
    Matrix m(f, j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != cols) {
            throw ParseError("matrix row " + std::to_string(r + 1) + " must have " +
                             std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& v = row[c];
            if (!v.is_number_integer() || v.get<long long>() < 0 ||
                v.get<unsigned long long>() >= f.q()) {
                throw ParseError("matrix entries must be integers in [0, " +
                                 std::to_string(f.q()) + ")");
            }
            m.at(r, c) = uint16_t(v.get<unsigned long long>());
        }
    }
    return m;
}

CodeSpec spec_from_json(const Json& j) {
    for (const char* field : {"q", "M", "N", "H", "K", "G"}) {
        if (!j.contains(field)) throw ParseError(std::string("spec is missing \"") + field + "\"");
    }
    if (!j["q"].is_number_integer() || !j["M"].is_number_integer() ||
        !j["N"].is_number_integer()) {
        throw ParseError("q, M, N must be integers");
    }
    long long q = j["q"].get<long long>();
    long long m = j["M"].get<long long>();
    long long n = j["N"].get<long long>();
    if (q < 2 || q >= (1 << 16)) throw ParseError("q out of range");
    if (m < 1 || n < 1) throw ParseError("M and N must be positive");
    Gf f((unsigned)(q));  // throws NonPrimeModulus for composite q
    Matrix h = matrix_from_json(f, j["H"], std::size_t(n));
    Matrix k = matrix_from_json(f, j["K"], std::size_t(n));
    Matrix g = matrix_from_json(f, j["G"], std::size_t(m));
    return CodeSpec(f, std::size_t(m), std::size_t(n), std::move(h), std::move(k),
                    std::move(g));
}

Json spec_to_json(const CodeSpec& spec) {
    return Json{{"q", spec.field.q()},
                {"M", spec.racks},
                {"N", spec.nodes},
                {"H", matrix_to_json(spec.h)},
                {"K", matrix_to_json(spec.k)},
                {"G", matrix_to_json(spec.g)}};
}

Scenario scenario_from_json(const Json& j, const CodeSpec& spec) {
    Scenario sc;
    if (!j.contains("rack") || !j["rack"].is_number_integer()) {
        throw ParseError("scenario needs an integer \"rack\"");
    }
    long long rack = j["rack"].get<long long>();
    if (rack < 1 || std::size_t(rack) > spec.racks) throw ParseError("rack out of range");
    sc.failure.rack = std::size_t(rack) - 1;
    if (!j.contains("failed")) throw ParseError("scenario needs a \"failed\" array");
    sc.failure.failed = index_set_from_json(j["failed"], spec.nodes, "failed");
    if (sc.failure.failed.empty()) throw ParseError("failed set must be nonempty");
    if (j.contains("target")) {
        long long t = j["target"].get<long long>();
        if (t < 1 || std::size_t(t) > spec.nodes) throw ParseError("target out of range");
        sc.target = std::size_t(t) - 1;
        if (!sc.failure.failed.count(*sc.target)) {
            throw ParseError("target must be one of the failed nodes");
        }
    }
    if (j.contains("seed")) sc.seed = j["seed"].get<uint64_t>();
    if (j.contains("policy")) {
        const Json& pol = j["policy"];
        if (pol.contains("r")) {
            const Json& rv = pol["r"];
            if (!rv.is_array() || rv.size() != spec.nodes)
                throw ParseError("policy r must be a length-N vector");
            Vec r(spec.nodes);
            for (std::size_t i = 0; i < spec.nodes; ++i) {
                long long v = rv[i].get<long long>();
                if (v < 0 || (unsigned long long)(v) >= spec.field.q())
                    throw ParseError("policy r entries must be canonical residues");
                r[i] = uint16_t(v);
            }
            sc.policy.force_r = std::move(r);
        }
        if (pol.contains("beta"))
            sc.policy.force_beta = index_set_from_json(pol["beta"], spec.nodes, "policy beta");
        if (pol.contains("tau"))
            sc.policy.force_tau = index_set_from_json(pol["tau"], spec.racks, "policy tau");
        if (pol.contains("allow_degenerate"))
            sc.policy.allow_degenerate = pol["allow_degenerate"].get<bool>();
    }
    return sc;
}

Json plan_to_json(const IntraRepairPlan& plan) {
    return Json{{"type", "intra"},
                {"rack", plan.rack + 1},
                {"node", plan.node + 1},
                {"beta", index_set_to_json(plan.beta)},
                {"coeffs", coeffs_to_json(plan.coeffs)}};
}

Json plan_to_json(const InterRepairPlan& plan) {
    Json d = Json::array();
    for (std::size_t m = 0; m < plan.coeffs_d.rows(); ++m) {
        Json row = Json::array();
        for (std::size_t s = 0; s < plan.coeffs_d.cols(); ++s)
            row.push_back(plan.coeffs_d.at(m, s));
        d.push_back(std::move(row));
    }
    return Json{{"type", plan.degenerate() ? "intra (degenerate)" : "inter"},
                {"rack", plan.rack + 1},
                {"node", plan.node + 1},
                {"r", vec_to_json(plan.r)},
                {"mu", index_set_to_json(plan.mu)},
                {"beta", index_set_to_json(plan.beta)},
                {"tau", index_set_to_json(plan.tau)},
                {"coeffs", coeffs_to_json(plan.coeffs_c)},
                {"d", std::move(d)}};
}

Json cost_to_json(const CostReport& cost) {
    return Json{{"theta_intra", cost.theta_intra},
                {"theta_inter", cost.theta_inter},
                {"bound_intra", cost.bound_intra},
                {"bound_inter", cost.bound_inter}};
}

Json schedule_to_json(const RepairSchedule& sched) {
    Json plans = Json::array();
    for (const InterRepairPlan& p : sched.inter) plans.push_back(plan_to_json(p));
    for (const IntraRepairPlan& p : sched.intra) plans.push_back(plan_to_json(p));
    Json per_node = Json::array();
    for (const NodeCost& c : sched.per_node) {
        per_node.push_back(Json{{"node", c.node + 1},
                                {"helpers", c.used_helpers},
                                {"intra", c.intra},
                                {"inter", c.inter}});
    }
    return Json{{"gamma", index_set_to_json(sched.gamma)},
                {"alpha", index_set_to_json(sched.alpha)},
                {"tau", index_set_to_json(sched.tau)},
                {"plans", std::move(plans)},
                {"per_node", std::move(per_node)},
                {"cost", cost_to_json(sched.cost)}};
}

Json enumerator_to_json(const EnumeratorTable& table) {
    Json entries = Json::array();
    for (const auto& [ws, cnt] : table.entries()) {
        Json w = Json::array(), s = Json::array();
        for (std::size_t i = 0; i < table.n(); ++i) {
            if (ws.first & (uint32_t(1) << i)) w.push_back(i + 1);
            if (ws.second & (uint32_t(1) << i)) s.push_back(i + 1);
        }
        entries.push_back(Json{{"w", std::move(w)}, {"s", std::move(s)}, {"count", cnt}});
    }
    return Json{{"N", table.n()}, {"q", table.q()}, {"total", table.total()},
                {"entries", std::move(entries)}};
}

Json validation_to_json(const ValidationReport& rep) {
    return Json{{"valid", rep.valid},
                {"errors", rep.errors},
                {"warnings", rep.warnings},
                {"rank_H", rep.rank_h},
                {"rank_K", rep.rank_k},
                {"rank_G", rep.rank_g},
                {"rank_stacked", rep.rank_stacked}};
}

namespace {
Json property_to_json(const PropertyResult& p) {
    Json out{{"pass", p.pass}, {"checked", p.checked}};
    if (!p.witness.empty()) out["witness"] = p.witness;
    return out;
}
}  // namespace

Json cert_to_json(const CertReport& rep) {
    return Json{{"symmetry", property_to_json(rep.symmetry)},
                {"intra_resilience", property_to_json(rep.intra_resilience)},
                {"intra_locality", property_to_json(rep.intra_locality)},
                {"inter_resilience", property_to_json(rep.inter_resilience)},
                {"inter_locality", property_to_json(rep.inter_locality)},
                {"all_pass", rep.all_pass()},
                {"note", rep.quantifier_note}};
}

Json bound_report_to_json(const BoundReport& rep) {
    Json entries = Json::array();
    for (const BoundEntry& e : rep.entries) {
        Json entry{{"i", e.i}};
        if (e.status == LPStatus::Optimal) {
            entry["O_star"] = e.o_star.get_str();
            entry["bound"] = e.bound;
            entry["status"] = "optimal";
        } else {
            entry["status"] = e.status == LPStatus::Infeasible ? "infeasible" : "unbounded";
        }
        entries.push_back(std::move(entry));
    }
    Json out{{"entries", std::move(entries)}, {"feasible", rep.any_feasible}};
    if (rep.any_feasible) {
        out["best_i"] = rep.best_i;
        out["bound"] = rep.best;
    }
    return out;
}

}  // namespace rackcode
