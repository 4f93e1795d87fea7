// Command-line surface for the multi-rack storage code toolkit: spec
// validation, repair planning and execution, support-enumerator analysis,
// class certification, and exact LP rate bounds.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "rackcode/json_io.hpp"

using namespace rackcode;

namespace {

uint64_t enumeration_cap() {
    if (const char* env = std::getenv("RACKCODE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return kDefaultSpanCap;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        Json j;
        in >> j;
        return j;
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

void print_table(const Json& j, const std::string& prefix) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            std::string name = prefix.empty() ? key : prefix + "." + key;
            if (value.is_object() || (value.is_array() && !value.empty() &&
                                      (value[0].is_object() || value[0].is_array()))) {
                print_table(value, name);
            } else {
                std::cout << name << " = " << value.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            print_table(j[i], prefix + "[" + std::to_string(i) + "]");
        }
    } else {
        std::cout << prefix << " = " << j.dump() << "\n";
    }
}

void emit(const Json& j, bool table) {
    if (table) {
        print_table(j, "");
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

Json rate_to_json(const CodeSpec& spec) {
    RateReport rate = code_rate(spec);
    long mn = long(spec.racks * spec.nodes);
    long lower_num = mn - long(spec.racks * spec.s1() + spec.l() * spec.s2());
    long exact_num = mn - long(rank(stacked_parity(spec)));
    return Json{{"lower", std::to_string(lower_num) + "/" + std::to_string(mn)},
                {"exact", std::to_string(exact_num) + "/" + std::to_string(mn)},
                {"lower_canonical", rate.lower_bound.get_str()},
                {"exact_canonical", rate.exact.get_str()},
                {"tight", rate.lower_bound == rate.exact}};
}

TwoRackCode two_rack_from_spec(const CodeSpec& spec, uint64_t cap) {
    if (spec.racks != 2) throw Error("this command needs a two-rack spec (M = 2)");
    return two_rack_code(spec.h, spec.k, cap);
}

int cmd_validate(const std::string& file, bool table) {
    CodeSpec spec = spec_from_json(load_json(file));
    ValidationReport rep = validate_spec(spec);
    Json out = validation_to_json(rep);
    if (rep.valid) {
        try {
            std::size_t dist = min_distance(spec.h, enumeration_cap());
            if (dist == kInfiniteDistance) {
                out["dist_H"] = "inf";
            } else {
                out["dist_H"] = dist;
            }
        } catch (const CodebookTooLarge&) {
            out["dist_H"] = nullptr;
        }
        out["rate"] = rate_to_json(spec);
        out["codewords"] = codebook_size(spec).get_str();
    }
    emit(out, table);
    return rep.valid ? 0 : 1;
}

int cmd_rate(const std::string& file, bool table) {
    CodeSpec spec = spec_from_json(load_json(file));
    emit(rate_to_json(spec), table);
    return 0;
}

int cmd_repair(const std::string& spec_file, const std::string& scenario_file, bool table) {
    uint64_t cap = enumeration_cap();
    CodeSpec spec = spec_from_json(load_json(spec_file));
    Scenario sc = scenario_from_json(load_json(scenario_file), spec);

    Json out;
    out["rack"] = sc.failure.rack + 1;
    out["failed"] = load_json(scenario_file)["failed"];
    std::mt19937_64 rng(sc.seed);
    CodewordSampler sampler(spec);
    Matrix original = sampler.sample(rng);
    ErasedMatrix observed = ErasedMatrix::erase(original, sc.failure.rack, sc.failure.failed);

    if (sc.target) {
        InterRepairPlan plan =
            plan_inter_repair(spec, sc.failure.rack, sc.failure.failed, *sc.target,
                              sc.policy, cap);
        NodeCost cost = plan_cost(plan);
        out["plan"] = plan_to_json(plan);
        out["cost"] = Json{{"node", cost.node + 1},
                           {"intra", cost.intra},
                           {"inter", cost.inter}};
        out["verified"] = execute_repair(observed, plan) == original.at(plan.rack, plan.node);
    } else {
        RepairSchedule sched = repair_all(spec, sc.failure, sc.policy, cap);
        out["schedule"] = schedule_to_json(sched);
        bool ok = true;
        for (const InterRepairPlan& p : sched.inter) {
            uint16_t v = execute_repair(observed, p);
            ok = ok && v == original.at(p.rack, p.node);
            observed.restore(p.rack, p.node, v);
        }
        for (const IntraRepairPlan& p : sched.intra) {
            uint16_t v = execute_repair(observed, p);
            ok = ok && v == original.at(p.rack, p.node);
            observed.restore(p.rack, p.node, v);
        }
        out["verified"] = ok && observed.values == original;
    }
    emit(out, table);
    return 0;
}

int cmd_certify(const std::string& file, const CodeClassParams& params, bool table) {
    CodeSpec spec = spec_from_json(load_json(file));
    TwoRackCode code = two_rack_from_spec(spec, enumeration_cap());
    CertReport rep = certify(code, params);
    Json out = cert_to_json(rep);
    out["params"] = Json{{"beta1", params.beta1}, {"Gamma1", params.Gamma1},
                         {"r1", params.r1},       {"beta2", params.beta2},
                         {"Gamma2", params.Gamma2}, {"r2", params.r2},
                         {"a", params.a}};
    emit(out, table);
    return 0;
}

int cmd_enumerate(const std::string& file, const std::string& kind, bool table) {
    CodeSpec spec = spec_from_json(load_json(file));
    uint64_t cap = enumeration_cap();
    EnumeratorTable out_table = [&]() {
        if (kind == "dual") {
            return macwilliams_dual(support_enumerator(two_rack_from_spec(spec, cap)));
        }
        if (kind == "brute-dual") return dual_bruteforce(spec.h, spec.k, cap);
        return support_enumerator(two_rack_from_spec(spec, cap));
    }();
    emit(enumerator_to_json(out_table), table);
    return 0;
}

struct BoundArgs {
    unsigned n = 4, q = 2, m = 2, l = 1;
    CodeClassParams params;
    bool lp1 = false, lp2 = false, both = false;
    bool weight1 = false;
    std::string export_prefix;
};

int cmd_bound(const BoundArgs& args, bool table) {
    if (args.l >= args.m) throw Error("need L < M for a meaningful bound");
    Lp2Options options;
    options.include_weight1_dual_term = args.weight1;
    const bool use_lp1 = args.lp1 || args.both;
    const bool use_lp2 = args.lp2 || args.both || !args.lp1;

    Json entries = Json::array();
    bool any_feasible = false;
    double best = 0;
    unsigned best_i = 0;
    int exit_code = 0;
    for (unsigned i = 0; i <= args.n; ++i) {
        mpz_class o1;
        mpz_ui_pow_ui(o1.get_mpz_t(), args.q, i);
        Json entry{{"i", i}};
        std::optional<LPSolution> full, reduced;
        if (use_lp1) {
            LPProblem p = build_lp1(args.n, args.q, args.params, o1);
            if (!args.export_prefix.empty()) {
                std::ofstream(args.export_prefix + "_lp1_i" + std::to_string(i) + ".lp")
                    << to_lp_format(p);
            }
            full = simplex_solve(p);
        }
        if (use_lp2) {
            LPProblem p = build_lp2(args.n, args.q, args.params, o1, options);
            if (!args.export_prefix.empty()) {
                std::ofstream(args.export_prefix + "_lp2_i" + std::to_string(i) + ".lp")
                    << to_lp_format(p);
            }
            reduced = simplex_solve(p);
        }
        const LPSolution& primary = use_lp1 ? *full : *reduced;
        if (args.both) {
            bool same = full->status == reduced->status &&
                        (full->status != LPStatus::Optimal || full->value == reduced->value);
            if (same) {
                entry["agree"] = true;
            } else {
                Lp2Options widened = options;
                widened.include_weight1_dual_term = true;
                LPSolution again =
                    simplex_solve(build_lp2(args.n, args.q, args.params, o1, widened));
                bool traced = full->status == again.status &&
                              (full->status != LPStatus::Optimal ||
                               full->value == again.value);
                entry["agree"] = false;
                if (traced) {
                    entry["gap"] = "reduced intra-locality row omits the weight-1 dual term";
                } else {
                    entry["gap"] = "unexplained disagreement";
                    exit_code = 1;
                }
            }
        }
        if (primary.status == LPStatus::Optimal) {
            entry["O_star"] = primary.value.get_str();
            double bound = double(i) / args.n +
                           double(args.m - args.l) / double(args.m * args.n) *
                               (log_q(args.q, primary.value) - 2.0 * i);
            entry["bound"] = bound;
            entry["status"] = "optimal";
            if (!any_feasible || bound > best) {
                best = bound;
                best_i = i;
            }
            any_feasible = true;
        } else {
            entry["status"] =
                primary.status == LPStatus::Infeasible ? "infeasible" : "unbounded";
        }
        entries.push_back(std::move(entry));
    }
    Json out{{"N", args.n}, {"q", args.q}, {"M", args.m}, {"L", args.l},
             {"entries", std::move(entries)}, {"feasible", any_feasible}};
    if (any_feasible) {
        out["best_i"] = best_i;
        out["bound"] = best;
    }
    emit(out, table);
    if (!any_feasible) return 1;
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-rack storage code toolkit"};
    app.require_subcommand(1);
    bool table = false;
    app.add_flag("--table", table, "aligned text output instead of JSON");

    std::string spec_file, scenario_file;
    auto* validate = app.add_subcommand("validate", "check a code spec, report ranks and rate");
    validate->add_option("spec", spec_file, "code spec JSON file")->required();

    auto* rate = app.add_subcommand("rate", "dimension-count and exact code rate");
    rate->add_option("spec", spec_file, "code spec JSON file")->required();

    auto* repair = app.add_subcommand("repair", "plan and verify a failure repair");
    repair->add_option("spec", spec_file, "code spec JSON file")->required();
    repair->add_option("scenario", scenario_file, "failure scenario JSON file")->required();

    CodeClassParams params;
    auto add_params = [&params](CLI::App* cmd) {
        cmd->add_option("--beta1", params.beta1, "intra-rack resilience");
        cmd->add_option("--Gamma1", params.Gamma1, "intra locality failure count");
        cmd->add_option("--r1", params.r1, "intra locality helper budget");
        cmd->add_option("--beta2", params.beta2, "inter-rack resilience");
        cmd->add_option("--Gamma2", params.Gamma2, "inter locality failure count");
        cmd->add_option("--r2", params.r2, "inter locality in-rack helper budget");
        cmd->add_option("--a", params.a, "helper symbols per helper rack");
    };
    auto* certify_cmd = app.add_subcommand("certify", "check class properties of a two-rack code");
    certify_cmd->add_option("spec", spec_file, "code spec JSON file")->required();
    add_params(certify_cmd);

    std::string enum_kind = "code";
    auto* enumerate_cmd =
        app.add_subcommand("enumerate", "support enumerator of a two-rack code");
    enumerate_cmd->add_option("spec", spec_file, "code spec JSON file")->required();
    enumerate_cmd->add_option("--kind", enum_kind, "code | dual | brute-dual")
        ->check(CLI::IsMember({"code", "dual", "brute-dual"}));

    BoundArgs bargs;
    auto* bound = app.add_subcommand("bound", "LP upper bounds on code size and rate");
    bound->add_option("--N", bargs.n, "nodes per rack")->required();
    bound->add_option("--q", bargs.q, "field size")->required();
    bound->add_option("--M", bargs.m, "rack count (default 2)");
    bound->add_option("--L", bargs.l, "helper parity rows (default 1)");
    bound->add_option("--beta1", bargs.params.beta1, "intra-rack resilience");
    bound->add_option("--Gamma1", bargs.params.Gamma1, "intra locality failure count");
    bound->add_option("--r1", bargs.params.r1, "intra locality helper budget");
    bound->add_option("--beta2", bargs.params.beta2, "inter-rack resilience");
    bound->add_option("--Gamma2", bargs.params.Gamma2, "inter locality failure count");
    bound->add_option("--r2", bargs.params.r2, "inter locality in-rack helper budget");
    bound->add_option("--a", bargs.params.a, "helper symbols per helper rack");
    bound->add_flag("--lp1", bargs.lp1, "solve the full program");
    bound->add_flag("--lp2", bargs.lp2, "solve the reduced program (default)");
    bound->add_flag("--both", bargs.both, "solve both and require equal optima");
    bound->add_flag("--with-weight1-term", bargs.weight1,
                    "count size-1 helper menus in the reduced intra-locality row");
    bound->add_option("--export", bargs.export_prefix, "write .lp files with this prefix");

    std::string delta_kind;
    struct {
        unsigned n = 4, q = 2, gamma1 = 0, gamma2 = 0;
        unsigned d = 0, e = 0, f = 0, dp = 0, ep = 0, fp = 0;
    } dargs;
    auto* delta = app.add_subcommand("delta", "reduced-program coefficient values");
    delta->add_option("kind", delta_kind, "delta1 | delta2 | delta3")
        ->required()
        ->check(CLI::IsMember({"delta1", "delta2", "delta3"}));
    delta->add_option("--N", dargs.n, "nodes per rack")->required();
    delta->add_option("--q", dargs.q, "field size (delta1)");
    delta->add_option("--Gamma1", dargs.gamma1, "intra locality failure count (delta2)");
    delta->add_option("--Gamma2", dargs.gamma2, "inter locality failure count (delta3)");
    delta->add_option("--d", dargs.d, "w-only size");
    delta->add_option("--e", dargs.e, "overlap size");
    delta->add_option("--f", dargs.f, "s-only size");
    delta->add_option("--dp", dargs.dp, "source w-only size (delta1)");
    delta->add_option("--ep", dargs.ep, "source overlap size (delta1)");
    delta->add_option("--fp", dargs.fp, "source s-only size (delta1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(spec_file, table);
        if (app.got_subcommand(rate)) return cmd_rate(spec_file, table);
        if (app.got_subcommand(repair)) return cmd_repair(spec_file, scenario_file, table);
        if (app.got_subcommand(certify_cmd)) return cmd_certify(spec_file, params, table);
        if (app.got_subcommand(enumerate_cmd)) return cmd_enumerate(spec_file, enum_kind, table);
        if (app.got_subcommand(bound)) return cmd_bound(bargs, table);
        if (app.got_subcommand(delta)) {
            mpz_class value;
            if (delta_kind == "delta2") {
                value = delta2(dargs.d, dargs.n, dargs.gamma1);
            } else if (delta_kind == "delta3") {
                value = delta3(dargs.d, dargs.e, dargs.f, dargs.n, dargs.gamma2);
            } else {
                value = delta1(dargs.d, dargs.e, dargs.f, dargs.dp, dargs.ep, dargs.fp,
                               dargs.n, dargs.q);
            }
            emit(Json{{"kind", delta_kind}, {"value", value.get_str()}}, table);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
