#include "rackcode/lp.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace rackcode {

namespace {

using Expr = std::map<std::size_t, Rational>;  // sparse linear expression

struct WorkRow {
    Expr coeffs;
    Rel rel;
    Rational rhs;
};

struct Substitution {
    std::size_t var;
    Expr expr;      // var = constant + expr over surviving variables
    Rational constant;
};

void substitute_into(Expr& coeffs, Rational& rhs, const Substitution& sub) {
    auto it = coeffs.find(sub.var);
    if (it == coeffs.end()) return;
    Rational factor = it->second;
    coeffs.erase(it);
    rhs -= factor * sub.constant;
    for (const auto& [v, c] : sub.expr) {
        Rational& slot = coeffs[v];
        slot += factor * c;
        if (slot == 0) coeffs.erase(v);
    }
}

}  // namespace

Rational objective_value(const LPProblem& p, const std::vector<Rational>& assignment) {
    Rational v = 0;
    for (std::size_t i = 0; i < p.n_vars(); ++i) v += p.objective[i] * assignment[i];
    return v;
}

bool check_feasible(const LPProblem& p, const std::vector<Rational>& assignment,
                    std::string* why) {
    if (assignment.size() != p.n_vars()) {
        if (why) *why = "assignment size mismatch";
        return false;
    }
    for (std::size_t i = 0; i < p.n_vars(); ++i) {
        if (p.nonneg[i] && assignment[i] < 0) {
            if (why) *why = "variable " + p.var_names[i] + " negative";
            return false;
        }
    }
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        Rational lhs = 0;
        for (const auto& [v, c] : p.rows[r].coeffs) lhs += c * assignment[v];
        const LinearConstraint& row = p.rows[r];
        bool ok = row.rel == Rel::Eq ? lhs == row.rhs
                  : row.rel == Rel::Ge ? lhs >= row.rhs
                                       : lhs <= row.rhs;
        if (!ok) {
            if (why) *why = "constraint " + std::to_string(r) + " violated";
            return false;
        }
    }
    return true;
}

namespace {

class SimplexTableau {
public:
    // rows: constraint coefficient rows over `width` columns plus rhs column
    SimplexTableau(std::size_t m, std::size_t width)
        : m_(m), width_(width), t_(m + 1, std::vector<Rational>(width + 1, 0)), basis_(m, 0) {}

    std::vector<Rational>& row(std::size_t i) { return t_[i]; }
    std::vector<Rational>& cost() { return t_[m_]; }
    std::vector<std::size_t>& basis() { return basis_; }
    std::size_t rhs_col() const { return width_; }
    std::size_t width() const { return width_; }
    std::size_t rows() const { return m_; }

    void drop_row(std::size_t i) {
        t_.erase(t_.begin() + long(i));
        basis_.erase(basis_.begin() + long(i));
        --m_;
    }

    void pivot(std::size_t pr, std::size_t pc) {
        std::vector<Rational>& prow = t_[pr];
        Rational inv = 1 / prow[pc];
        for (Rational& v : prow) v *= inv;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == pr) continue;
            Rational factor = t_[i][pc];
            if (factor == 0) continue;
            std::vector<Rational>& target = t_[i];
            for (std::size_t j = 0; j <= width_; ++j) {
                if (prow[j] != 0) target[j] -= factor * prow[j];
            }
        }
        basis_[pr] = pc;
    }

    /// Maximizes over columns marked eligible. Returns false on unbounded.
    bool run(const std::vector<uint8_t>& eligible) {
        const std::size_t stall_limit = 64;
        std::size_t stalls = 0;
        bool bland = false;
        Rational last = -cost()[rhs_col()];
        while (true) {
            std::size_t enter = width_;
            if (bland) {
                for (std::size_t j = 0; j < width_; ++j) {
                    if (eligible[j] && cost()[j] > 0) {
                        enter = j;
                        break;
                    }
                }
            } else {
                for (std::size_t j = 0; j < width_; ++j) {
                    if (eligible[j] && cost()[j] > 0 &&
                        (enter == width_ || cost()[j] > cost()[enter])) {
                        enter = j;
                    }
                }
            }
            if (enter == width_) return true;  // optimal

            std::size_t leave = m_;
            Rational best_ratio = 0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 0) continue;
                Rational ratio = t_[i][rhs_col()] / t_[i][enter];
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return false;  // unbounded

            pivot(leave, enter);
            Rational now = -cost()[rhs_col()];
            if (now == last) {
                if (!bland && ++stalls > stall_limit) bland = true;  // anti-cycling
            } else {
                stalls = 0;
                last = now;
            }
        }
    }

private:
    std::size_t m_;
    std::size_t width_;
    std::vector<std::vector<Rational>> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LPSolution simplex_solve(const LPProblem& p) {
    const std::size_t n = p.n_vars();

    // ---- presolve: eliminate equality rows by substitution ----
    std::vector<WorkRow> rows;
    rows.reserve(p.rows.size());
    for (const LinearConstraint& c : p.rows) {
        WorkRow w;
        for (const auto& [v, coef] : c.coeffs)
            if (coef != 0) w.coeffs[v] += coef;
        for (auto it = w.coeffs.begin(); it != w.coeffs.end();) {
            it = it->second == 0 ? w.coeffs.erase(it) : std::next(it);
        }
        w.rel = c.rel;
        w.rhs = c.rhs;
        rows.push_back(std::move(w));
    }
    Expr obj;
    for (std::size_t i = 0; i < n; ++i)
        if (p.objective[i] != 0) obj[i] = p.objective[i];
    Rational obj_offset = 0;

    std::vector<Substitution> subs;
    std::vector<uint8_t> eliminated(n, 0);
    while (true) {
        std::size_t eq_idx = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].rel == Rel::Eq) {
                eq_idx = i;
                break;
            }
        }
        if (eq_idx == rows.size()) break;
        WorkRow eq = std::move(rows[eq_idx]);
        rows.erase(rows.begin() + long(eq_idx));
        if (eq.coeffs.empty()) {
            if (eq.rhs != 0) return LPSolution{LPStatus::Infeasible, 0, {}};
            continue;
        }
        // pivot on the variable with the fewest occurrences elsewhere
        std::map<std::size_t, std::size_t> uses;
        for (const WorkRow& w : rows)
            for (const auto& [v, c] : w.coeffs) ++uses[v];
        std::size_t pivot_var = eq.coeffs.begin()->first;
        std::size_t best_uses = SIZE_MAX;
        for (const auto& [v, c] : eq.coeffs) {
            std::size_t u = uses.count(v) ? uses[v] : 0;
            if (u < best_uses) {
                best_uses = u;
                pivot_var = v;
            }
        }
        Rational pivot_coef = eq.coeffs[pivot_var];
        eq.coeffs.erase(pivot_var);

        Substitution sub;
        sub.var = pivot_var;
        sub.constant = eq.rhs / pivot_coef;
        for (const auto& [v, c] : eq.coeffs) sub.expr[v] = -c / pivot_coef;

        for (WorkRow& w : rows) substitute_into(w.coeffs, w.rhs, sub);
        {
            Rational neg_offset = -obj_offset;
            substitute_into(obj, neg_offset, sub);
            obj_offset = -neg_offset;
        }
        if (p.nonneg[pivot_var]) {
            // eliminated variable keeps its sign restriction:
            // constant + expr >= 0
            WorkRow keep;
            keep.rel = Rel::Ge;
            keep.rhs = -sub.constant;
            keep.coeffs = sub.expr;
            rows.push_back(std::move(keep));
        }
        eliminated[pivot_var] = 1;
        subs.push_back(std::move(sub));
    }

    // ---- column layout for the tableau ----
    // surviving variables; free ones are split x = xp - xm
    std::vector<std::size_t> col_of(n, SIZE_MAX), neg_col_of(n, SIZE_MAX);
    std::vector<std::size_t> var_of_col;
    for (std::size_t v = 0; v < n; ++v) {
        if (eliminated[v]) continue;
        col_of[v] = var_of_col.size();
        var_of_col.push_back(v);
        if (!p.nonneg[v]) {
            neg_col_of[v] = var_of_col.size();
            var_of_col.push_back(v);
        }
    }
    const std::size_t n_struct = var_of_col.size();
    const std::size_t m = rows.size();

    // slack / artificial bookkeeping
    std::size_t n_slack = 0, n_art = 0;
    for (WorkRow& w : rows) {
        if (w.rhs < 0) {
            // normalize to a non-negative right-hand side
            for (auto& [v, c] : w.coeffs) c = -c;
            w.rhs = -w.rhs;
            w.rel = w.rel == Rel::Ge ? Rel::Le : Rel::Ge;
        }
        ++n_slack;
        if (w.rel == Rel::Ge && w.rhs != 0) ++n_art;
        // Ge rows with zero rhs act like Le after negation of the surplus;
        // keep it simple: every Ge row gets an artificial
        if (w.rel == Rel::Ge && w.rhs == 0) ++n_art;
    }

    const std::size_t width = n_struct + n_slack + n_art;
    SimplexTableau tab(m, width);
    std::vector<uint8_t> eligible(width, 1);
    std::vector<uint8_t> is_artificial(width, 0);

    std::size_t slack_base = n_struct;
    std::size_t art_base = n_struct + n_slack;
    std::size_t slack_i = 0, art_i = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const WorkRow& w = rows[i];
        std::vector<Rational>& row = tab.row(i);
        for (const auto& [v, c] : w.coeffs) {
            row[col_of[v]] += c;
            if (neg_col_of[v] != SIZE_MAX) row[neg_col_of[v]] -= c;
        }
        row[tab.rhs_col()] = w.rhs;
        std::size_t s = slack_base + slack_i++;
        if (w.rel == Rel::Le) {
            row[s] = 1;
            tab.basis()[i] = s;
        } else {
            row[s] = -1;  // surplus
            std::size_t a = art_base + art_i++;
            row[a] = 1;
            is_artificial[a] = 1;
            tab.basis()[i] = a;
        }
    }

    // ---- phase 1 ----
    if (n_art > 0) {
        for (std::size_t j = 0; j <= width; ++j) {
            Rational sum = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (is_artificial[tab.basis()[i]]) sum += tab.row(i)[j];
            }
            tab.cost()[j] = sum;
        }
        for (std::size_t j = 0; j < width; ++j) {
            if (is_artificial[j]) tab.cost()[j] = 0;
        }
        if (!tab.run(eligible)) {
            throw Error("phase-1 objective cannot be unbounded");
        }
        // cost rhs holds -z where z = -(sum of artificials)
        if (tab.cost()[tab.rhs_col()] != 0) {
            return LPSolution{LPStatus::Infeasible, 0, {}};
        }
        // drive leftover artificials out of the basis
        for (std::size_t i = tab.rows(); i-- > 0;) {
            if (!is_artificial[tab.basis()[i]]) continue;
            std::size_t pc = width;
            for (std::size_t j = 0; j < width; ++j) {
                if (!is_artificial[j] && tab.row(i)[j] != 0) {
                    pc = j;
                    break;
                }
            }
            if (pc == width) {
                tab.drop_row(i);  // redundant constraint
            } else {
                tab.pivot(i, pc);
            }
        }
        for (std::size_t j = 0; j < width; ++j) {
            if (is_artificial[j]) eligible[j] = 0;
        }
    }

    // ---- phase 2 ----
    auto struct_cost = [&](std::size_t col) -> Rational {
        if (col >= n_struct) return 0;
        std::size_t v = var_of_col[col];
        Rational c = obj.count(v) ? obj.at(v) : Rational(0);
        // second column of a split free variable carries the negated cost
        if (neg_col_of[v] == col) return -c;
        return c;
    };
    for (std::size_t j = 0; j <= width; ++j) tab.cost()[j] = 0;
    for (std::size_t j = 0; j < width; ++j) tab.cost()[j] = struct_cost(j);
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        Rational cb = struct_cost(tab.basis()[i]);
        if (cb == 0) continue;
        for (std::size_t j = 0; j <= width; ++j) {
            if (tab.row(i)[j] != 0) tab.cost()[j] -= cb * tab.row(i)[j];
        }
    }
    if (!tab.run(eligible)) {
        return LPSolution{LPStatus::Unbounded, 0, {}};
    }

    // ---- recover the full assignment ----
    std::vector<Rational> col_value(width, 0);
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        col_value[tab.basis()[i]] = tab.row(i)[tab.rhs_col()];
    }
    std::vector<Rational> x(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (col_of[v] == SIZE_MAX) continue;
        x[v] = col_value[col_of[v]];
        if (neg_col_of[v] != SIZE_MAX) x[v] -= col_value[neg_col_of[v]];
    }
    for (std::size_t si = subs.size(); si-- > 0;) {
        const Substitution& sub = subs[si];
        Rational v = sub.constant;
        for (const auto& [u, c] : sub.expr) v += c * x[u];
        x[sub.var] = v;
    }

    LPSolution sol;
    sol.status = LPStatus::Optimal;
    sol.assignment = std::move(x);
    sol.value = objective_value(p, sol.assignment);

    std::string why;
    if (!check_feasible(p, sol.assignment, &why)) {
        throw Error("simplex returned an infeasible point: " + why);
    }
    return sol;
}

std::string to_lp_format(const LPProblem& p) {
    auto scale_of = [](const std::vector<Rational>& vals) {
        mpz_class lcm = 1;
        for (const Rational& v : vals) {
            mpz_class den = v.get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
        return lcm;
    };
    auto term = [](const Rational& c, const std::string& name, bool first) {
        std::string out;
        Rational a = c < 0 ? Rational(-c) : c;
        out += c < 0 ? "- " : (first ? "" : "+ ");
        if (a != 1) out += a.get_str() + " ";
        out += name;
        return out;
    };

    std::ostringstream os;
    std::vector<Rational> obj_vals;
    for (const Rational& c : p.objective) obj_vals.push_back(c);
    mpz_class obj_scale = scale_of(obj_vals);
    if (obj_scale != 1) os << "\\ objective scaled by " << obj_scale.get_str() << "\n";
    os << "Maximize\n obj:";
    bool first = true;
    for (std::size_t v = 0; v < p.n_vars(); ++v) {
        if (p.objective[v] == 0) continue;
        Rational c = p.objective[v] * Rational(obj_scale);
        os << " " << term(c, p.var_names[v], first);
        first = false;
    }
    if (first) os << " 0 " << (p.n_vars() ? p.var_names[0] : "x");
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        const LinearConstraint& row = p.rows[r];
        std::vector<Rational> vals;
        for (const auto& [v, c] : row.coeffs) vals.push_back(c);
        vals.push_back(row.rhs);
        mpz_class s = scale_of(vals);
        os << " c" << r << ":";
        bool f2 = true;
        for (const auto& [v, c] : row.coeffs) {
            if (c == 0) continue;
            os << " " << term(c * Rational(s), p.var_names[v], f2);
            f2 = false;
        }
        if (f2) os << " 0 " << (p.n_vars() ? p.var_names[0] : "x");
        os << (row.rel == Rel::Eq ? " = " : row.rel == Rel::Ge ? " >= " : " <= ");
        os << Rational(row.rhs * Rational(s)).get_str() << "\n";
    }
    os << "Bounds\n";
    for (std::size_t v = 0; v < p.n_vars(); ++v) {
        if (!p.nonneg[v]) os << " " << p.var_names[v] << " free\n";
    }
    os << "End\n";
    return os.str();
}

}  // namespace rackcode
