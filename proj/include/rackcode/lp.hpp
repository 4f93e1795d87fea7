#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "rackcode/errors.hpp"

namespace rackcode {

using Rational = mpq_class;

enum class Rel { Eq, Ge, Le };

struct LinearConstraint {
    std::vector<std::pair<std::size_t, Rational>> coeffs;  // sparse, indices unique
    Rel rel = Rel::Eq;
    Rational rhs = 0;
};

/// Maximization problem over rational variables, some flagged non-negative.
struct LPProblem {
    std::vector<std::string> var_names;
    std::vector<Rational> objective;  // dense, one per variable
    std::vector<LinearConstraint> rows;
    std::vector<uint8_t> nonneg;

    std::size_t add_var(std::string name, bool nonnegative) {
        var_names.push_back(std::move(name));
        objective.push_back(0);
        nonneg.push_back(nonnegative ? 1 : 0);
        return var_names.size() - 1;
    }
    void add_row(std::vector<std::pair<std::size_t, Rational>> coeffs, Rel rel, Rational rhs) {
        rows.push_back(LinearConstraint{std::move(coeffs), rel, std::move(rhs)});
    }
    std::size_t n_vars() const { return var_names.size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Rational value = 0;                  // meaningful only when Optimal
    std::vector<Rational> assignment;    // one value per variable when Optimal
};

Rational objective_value(const LPProblem& p, const std::vector<Rational>& assignment);

/// Exact check of every constraint and sign restriction; optionally reports
/// the first violated one.
bool check_feasible(const LPProblem& p, const std::vector<Rational>& assignment,
                    std::string* why = nullptr);

/// Exact rational simplex: equality presolve, two-phase tableau, largest-
/// coefficient pivoting with a permanent switch to Bland's rule on stalls
/// (anti-cycling), and a final constraint-by-constraint feasibility
/// re-verification of the returned point.
LPSolution simplex_solve(const LPProblem& p);

/// CPLEX-style LP text export. Rows with fractional coefficients are scaled
/// to integers (an equivalence transform); a scaled objective is noted in a
/// leading comment.
std::string to_lp_format(const LPProblem& p);

}  // namespace rackcode
