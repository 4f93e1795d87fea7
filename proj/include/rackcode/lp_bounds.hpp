#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rackcode/enumerator.hpp"
#include "rackcode/lp.hpp"

namespace rackcode {

// Size bounds on two-rack codes of a given resilience/locality class, as a
// pair of linear programs over exact rationals. The full program ranges over
// all support pairs (w, s); the reduced one collapses node-permutation orbits
// to triples (d, e, f) = (|w\s|, |w&s|, |s\w|).

mpz_class binomial(long n, long k);
mpz_class multinomial3(unsigned n, unsigned d, unsigned e, unsigned f);

/// Orbit count of intra-locality helper menus: sets w with i in w,
/// w disjoint from gamma, |w| = d. Independent of the concrete (i, gamma).
mpz_class delta2(unsigned d, unsigned n, unsigned gamma1);

/// Orbit count of helper-rack menus with signature (d, e, f): pairs (w, s)
/// with i in w, w disjoint from gamma. Split over i in s / i not in s.
mpz_class delta3(unsigned d, unsigned e, unsigned f, unsigned n, unsigned gamma2);

/// Transform weight between orbits: sum over 4x4 contingency tables with row
/// sums (d, e, f, n-d-e-f) and column sums (d', e', f', n-d'-e'-f') of the
/// per-table count times (q-1)^sigma1 times (-1)^sigma2.
mpz_class delta1(unsigned d, unsigned e, unsigned f, unsigned dp, unsigned ep, unsigned fp,
                 unsigned n, unsigned q);

/// All (d, e, f) with d+e+f <= n, lexicographic.
std::vector<std::array<unsigned, 3>> orbit_triples(unsigned n);

/// Full table of delta1 over all orbit pairs, built in one enumeration pass
/// over every contingency table of total n.
std::vector<std::vector<mpz_class>> delta1_table(unsigned n, unsigned q);

// Variable layout of the full program: A block then C block, each indexed by
// (w << n) | s.
inline std::size_t lp1_a_index(unsigned n, uint32_t w, uint32_t s) {
    return (std::size_t(w) << n) | s;
}
inline std::size_t lp1_c_index(unsigned n, uint32_t w, uint32_t s) {
    return (std::size_t(1) << (2 * n)) + ((std::size_t(w) << n) | s);
}

/// Full program over A_{w,s} and C_{w,s}. Locality rows are emitted only for
/// claimed localities (r1 >= 1 for the intra family, a >= 1 for the inter
/// family); resilience rows vanish on their own when beta is 0.
/// Throws ProblemTooLarge for n > 6.
LPProblem build_lp1(unsigned n, unsigned q, const CodeClassParams& params,
                    const mpz_class& o1);

struct Lp2Options {
    /// The reduced intra-locality row as printed sums helper menus of size 2
    /// and up; setting this also counts the size-1 menu (the lone dual word
    /// through i), which the full program always includes.
    bool include_weight1_dual_term = false;
};

/// Reduced program over X_{d,e,f} and Y_{d,e,f}.
LPProblem build_lp2(unsigned n, unsigned q, const CodeClassParams& params,
                    const mpz_class& o1, const Lp2Options& options = {});

// Variable layout of the reduced program: X block then Y block, ordered as
// orbit_triples.
std::size_t lp2_x_index(unsigned n, unsigned d, unsigned e, unsigned f);
std::size_t lp2_y_index(unsigned n, unsigned d, unsigned e, unsigned f);

struct BoundEntry {
    unsigned i = 0;             // fixed x-only mass is q^i
    LPStatus status = LPStatus::Infeasible;
    Rational o_star = 0;        // reduced-program optimum when feasible
    double bound = 0.0;         // i/N + (M-L)/(MN) (log_q O* - 2i)
};

struct BoundReport {
    std::vector<BoundEntry> entries;
    bool any_feasible = false;
    unsigned best_i = 0;
    double best = 0.0;
};

/// log base q of a positive rational, in double precision (~1e-12 relative).
double log_q(unsigned q, const Rational& v);

/// Scans i = 0..N with the reduced program; all feasibility logic is exact,
/// floating point enters only in the final logarithms.
BoundReport rate_upper_bound(unsigned n, unsigned m, unsigned l, unsigned q,
                             const CodeClassParams& params,
                             const Lp2Options& options = {});

}  // namespace rackcode
