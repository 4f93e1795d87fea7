#include "rackcode/lp_bounds.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace rackcode {

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), (unsigned long)(n), (unsigned long)(k));
    return out;
}

mpz_class multinomial3(unsigned n, unsigned d, unsigned e, unsigned f) {
    if (d + e + f > n) return 0;
    return binomial(n, d) * binomial(n - d, e) * binomial(n - d - e, f);
}

mpz_class delta2(unsigned d, unsigned n, unsigned gamma1) {
    if (d == 0) return 0;  // every menu contains i itself
    return binomial(long(n) - long(gamma1) - 1, long(d) - 1);
}

mpz_class delta3(unsigned d, unsigned e, unsigned f, unsigned n, unsigned gamma2) {
    const long nn = long(n), g = long(gamma2);
    // i in both w and s: the rest of the overlap avoids gamma and i, then the
    // w-only part, then the s-only part from everything outside w
    mpz_class part1 = binomial(nn - g - 1, long(e) - 1) * binomial(nn - g - long(e), long(d)) *
                      binomial(nn - long(e) - long(d), long(f));
    // i in w only
    mpz_class part2 = binomial(nn - g - 1, long(e)) * binomial(nn - g - long(e) - 1, long(d) - 1) *
                      binomial(nn - long(e) - long(d), long(f));
    return part1 + part2;
}

namespace {

struct ZetaAccumulator {
    // sigma1 = |w \ w'| + |s \ s'|, sigma2 = |w & w'| + |s & s'| in terms of
    // the 4x4 class-overlap counts (row classes of (w,s), columns of (w',s'))
    static unsigned sigma1(const std::array<std::array<unsigned, 4>, 4>& z) {
        return z[0][2] + z[0][3] + z[1][2] + 2 * z[1][3] + z[1][0] + z[2][0] + z[2][3];
    }
    static unsigned sigma2(const std::array<std::array<unsigned, 4>, 4>& z) {
        return z[0][0] + z[0][1] + z[1][0] + 2 * z[1][1] + z[1][2] + z[2][1] + z[2][2];
    }
};

mpz_class table_count(const std::array<std::array<unsigned, 4>, 4>& z) {
    mpz_class u = 1;
    for (int i = 0; i < 4; ++i) {
        unsigned rowsum = z[i][0] + z[i][1] + z[i][2] + z[i][3];
        u *= multinomial3(rowsum, z[i][0], z[i][1], z[i][2]);
    }
    return u;
}

}  // namespace

mpz_class delta1(unsigned d, unsigned e, unsigned f, unsigned dp, unsigned ep, unsigned fp,
                 unsigned n, unsigned q) {
    if (d + e + f > n || dp + ep + fp > n) return 0;
    const std::array<unsigned, 4> rows = {d, e, f, n - d - e - f};
    const std::array<unsigned, 4> cols = {dp, ep, fp, n - dp - ep - fp};
    std::vector<mpz_class> qpow(2 * n + 1);
    qpow[0] = 1;
    for (unsigned i = 1; i <= 2 * n; ++i) qpow[i] = qpow[i - 1] * (q - 1);

    mpz_class acc = 0;
    std::array<std::array<unsigned, 4>, 4> z{};
    std::array<unsigned, 4> col_used{};
    // lexicographic fill with row/column pruning; the last cell of each row
    // and the whole last row are forced
    auto rec = [&](auto&& self, int row, int col, unsigned row_used) -> void {
        if (row == 3) {
            for (int j = 0; j < 4; ++j) {
                if (cols[j] < col_used[j]) return;
                z[3][j] = cols[j] - col_used[j];
            }
            unsigned last_sum = z[3][0] + z[3][1] + z[3][2] + z[3][3];
            if (last_sum != rows[3]) return;
            unsigned s1 = ZetaAccumulator::sigma1(z);
            mpz_class term = table_count(z) * qpow[s1];
            if (ZetaAccumulator::sigma2(z) % 2) {
                acc -= term;
            } else {
                acc += term;
            }
            return;
        }
        if (col == 3) {
            unsigned v = rows[row] - row_used;
            if (col_used[3] + v > cols[3]) return;
            z[row][3] = v;
            col_used[3] += v;
            self(self, row + 1, 0, 0);
            col_used[3] -= v;
            return;
        }
        unsigned max_v = std::min(rows[row] - row_used, cols[col] - col_used[col]);
        for (unsigned v = 0; v <= max_v; ++v) {
            z[row][col] = v;
            col_used[col] += v;
            self(self, row, col + 1, row_used + v);
            col_used[col] -= v;
        }
        z[row][col] = 0;
    };
    rec(rec, 0, 0, 0);
    return acc;
}

std::vector<std::array<unsigned, 3>> orbit_triples(unsigned n) {
    std::vector<std::array<unsigned, 3>> out;
    for (unsigned d = 0; d <= n; ++d)
        for (unsigned e = 0; d + e <= n; ++e)
            for (unsigned f = 0; d + e + f <= n; ++f) out.push_back({d, e, f});
    return out;
}

std::vector<std::vector<mpz_class>> delta1_table(unsigned n, unsigned q) {
    std::vector<std::array<unsigned, 3>> triples = orbit_triples(n);
    std::vector<std::size_t> index(std::size_t(n + 1) * (n + 1) * (n + 1), SIZE_MAX);
    auto key = [n](unsigned d, unsigned e, unsigned f) {
        return (std::size_t(d) * (n + 1) + e) * (n + 1) + f;
    };
    for (std::size_t i = 0; i < triples.size(); ++i)
        index[key(triples[i][0], triples[i][1], triples[i][2])] = i;

    std::vector<mpz_class> qpow(2 * n + 1);
    qpow[0] = 1;
    for (unsigned i = 1; i <= 2 * n; ++i) qpow[i] = qpow[i - 1] * (q - 1);

    std::vector<std::vector<mpz_class>> table(triples.size(),
                                              std::vector<mpz_class>(triples.size(), 0));
    // one pass over every 4x4 table with total n; margins identify the cell
    std::array<std::array<unsigned, 4>, 4> z{};
    auto rec = [&](auto&& self, int cell, unsigned used) -> void {
        if (cell == 16) {
            if (used != n) return;
            std::array<unsigned, 4> rsum{}, csum{};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    rsum[i] += z[i][j];
                    csum[j] += z[i][j];
                }
            std::size_t ti = index[key(rsum[0], rsum[1], rsum[2])];
            std::size_t tj = index[key(csum[0], csum[1], csum[2])];
            mpz_class term = table_count(z) * qpow[ZetaAccumulator::sigma1(z)];
            if (ZetaAccumulator::sigma2(z) % 2) {
                table[ti][tj] -= term;
            } else {
                table[ti][tj] += term;
            }
            return;
        }
        // the final cell absorbs the remainder
        if (cell == 15) {
            z[3][3] = n - used;
            self(self, 16, n);
            z[3][3] = 0;
            return;
        }
        for (unsigned v = 0; used + v <= n; ++v) {
            z[cell / 4][cell % 4] = v;
            self(self, cell + 1, used + v);
        }
        z[cell / 4][cell % 4] = 0;
    };
    rec(rec, 0, 0);
    return table;
}

LPProblem build_lp1(unsigned n, unsigned q, const CodeClassParams& params,
                    const mpz_class& o1) {
    if (n > 6) {
        throw ProblemTooLarge("full program needs 2*4^n variables; refusing n = " +
                              std::to_string(n) + " (max 6)");
    }
    const uint32_t subsets = uint32_t(1) << n;
    const std::size_t pairs = std::size_t(subsets) * subsets;

    LPProblem p;
    for (uint32_t w = 0; w < subsets; ++w)
        for (uint32_t s = 0; s < subsets; ++s)
            p.add_var("A_" + std::to_string(w) + "_" + std::to_string(s), true);
    for (uint32_t w = 0; w < subsets; ++w)
        for (uint32_t s = 0; s < subsets; ++s)
            p.add_var("C_" + std::to_string(w) + "_" + std::to_string(s), true);
    for (std::size_t i = 0; i < pairs; ++i) p.objective[i] = 1;

    std::vector<mpz_class> qpow(2 * n + 1);
    qpow[0] = 1;
    for (unsigned i = 1; i <= 2 * n; ++i) qpow[i] = qpow[i - 1] * (q - 1);
    auto kappa_product = [&](uint32_t wp, uint32_t w, uint32_t sp, uint32_t s) {
        unsigned grow = unsigned(std::popcount(w & ~wp)) + unsigned(std::popcount(s & ~sp));
        unsigned flip = unsigned(std::popcount(w & wp)) + unsigned(std::popcount(s & sp));
        Rational v(qpow[grow]);
        return flip % 2 ? Rational(-v) : v;
    };

    // symmetry in the two rack coordinates
    for (uint32_t w = 0; w < subsets; ++w) {
        for (uint32_t s = 0; s < subsets; ++s) {
            if ((uint64_t(w) << n | s) < (uint64_t(s) << n | w)) {
                p.add_row({{lp1_a_index(n, w, s), 1}, {lp1_a_index(n, s, w), -1}}, Rel::Eq, 0);
            }
        }
    }
    // transform rows tie the C block to the A block
    for (uint32_t w = 0; w < subsets; ++w) {
        for (uint32_t s = 0; s < subsets; ++s) {
            std::vector<std::pair<std::size_t, Rational>> row;
            row.reserve(pairs + 1);
            row.push_back({lp1_c_index(n, w, s), 1});
            for (uint32_t wp = 0; wp < subsets; ++wp)
                for (uint32_t sp = 0; sp < subsets; ++sp)
                    row.push_back({lp1_a_index(n, wp, sp), -kappa_product(wp, w, sp, s)});
            p.add_row(std::move(row), Rel::Eq, 0);
        }
    }
    // exactly one zero codeword
    p.add_row({{lp1_a_index(n, 0, 0), 1}}, Rel::Eq, 1);
    // resilience: no codeword mass on small x-supports
    for (uint32_t w = 1; w < subsets; ++w) {
        unsigned wt = unsigned(std::popcount(w));
        if (wt >= 1 && wt <= params.beta1) {
            for (uint32_t s = 0; s < subsets; ++s)
                p.add_row({{lp1_a_index(n, w, s), 1}}, Rel::Eq, 0);
        }
        if (wt >= 1 && wt <= params.beta2) {
            p.add_row({{lp1_a_index(n, w, 0), 1}}, Rel::Eq, 0);
        }
    }
    // locality families, one row per (i, gamma)
    auto add_locality_rows = [&](unsigned gamma_size, auto&& menu_coeffs) {
        for (unsigned i = 0; i < n; ++i) {
            uint32_t ibit = uint32_t(1) << i;
            for (uint32_t gamma = 0; gamma < subsets; ++gamma) {
                if (unsigned(std::popcount(gamma)) != gamma_size || (gamma & ibit)) continue;
                std::vector<std::pair<std::size_t, Rational>> row;
                menu_coeffs(ibit, gamma, row);
                for (std::size_t ai = 0; ai < pairs; ++ai) row.push_back({ai, -(long(q) - 1)});
                p.add_row(std::move(row), Rel::Ge, 0);
            }
        }
    };
    if (params.r1 >= 1) {
        add_locality_rows(params.Gamma1, [&](uint32_t ibit, uint32_t gamma, auto& row) {
            for (uint32_t w = 0; w < subsets; ++w) {
                if (!(w & ibit) || (w & gamma)) continue;
                if (unsigned(std::popcount(w)) > params.r1 + 1) continue;
                row.push_back({lp1_c_index(n, w, 0), 1});
            }
        });
    }
    if (params.a >= 1) {
        add_locality_rows(params.Gamma2, [&](uint32_t ibit, uint32_t gamma, auto& row) {
            for (uint32_t w = 0; w < subsets; ++w) {
                if (!(w & ibit) || (w & gamma)) continue;
                if (unsigned(std::popcount(w)) > params.r2 + 1) continue;
                for (uint32_t s = 0; s < subsets; ++s) {
                    if (unsigned(std::popcount(s)) > params.a) continue;
                    row.push_back({lp1_c_index(n, w, s), 1});
                }
            }
        });
    }
    // fixed x-only mass
    {
        std::vector<std::pair<std::size_t, Rational>> row;
        for (uint32_t w = 0; w < subsets; ++w) row.push_back({lp1_a_index(n, w, 0), 1});
        p.add_row(std::move(row), Rel::Eq, Rational(o1));
    }
    return p;
}

std::size_t lp2_x_index(unsigned n, unsigned d, unsigned e, unsigned f) {
    // position within the lexicographic triple list
    std::size_t idx = 0;
    for (unsigned dd = 0; dd < d; ++dd)
        for (unsigned ee = 0; dd + ee <= n; ++ee)
            for (unsigned ff = 0; dd + ee + ff <= n; ++ff) ++idx;
    for (unsigned ee = 0; ee < e; ++ee)
        for (unsigned ff = 0; d + ee + ff <= n; ++ff) ++idx;
    return idx + f;
}

std::size_t lp2_y_index(unsigned n, unsigned d, unsigned e, unsigned f) {
    return orbit_triples(n).size() + lp2_x_index(n, d, e, f);
}

LPProblem build_lp2(unsigned n, unsigned q, const CodeClassParams& params,
                    const mpz_class& o1, const Lp2Options& options) {
    const std::vector<std::array<unsigned, 3>> triples = orbit_triples(n);
    const std::size_t t = triples.size();

    LPProblem p;
    auto name = [](const char* base, const std::array<unsigned, 3>& tr) {
        return std::string(base) + "_" + std::to_string(tr[0]) + "_" + std::to_string(tr[1]) +
               "_" + std::to_string(tr[2]);
    };
    for (const auto& tr : triples) p.add_var(name("X", tr), true);
    for (const auto& tr : triples) p.add_var(name("Y", tr), true);

    std::vector<mpz_class> weight(t);
    for (std::size_t i = 0; i < t; ++i)
        weight[i] = multinomial3(n, triples[i][0], triples[i][1], triples[i][2]);
    for (std::size_t i = 0; i < t; ++i) p.objective[i] = Rational(weight[i]);

    auto x_idx = [&](unsigned d, unsigned e, unsigned f) { return lp2_x_index(n, d, e, f); };

    // swap symmetry of the two rack coordinates
    for (std::size_t i = 0; i < t; ++i) {
        const auto& [d, e, f] = triples[i];
        if (d < f) p.add_row({{i, 1}, {x_idx(f, e, d), -1}}, Rel::Eq, 0);
    }
    // transform rows
    std::vector<std::vector<mpz_class>> dtable = delta1_table(n, q);
    for (std::size_t i = 0; i < t; ++i) {
        std::vector<std::pair<std::size_t, Rational>> row;
        row.reserve(t + 1);
        row.push_back({t + i, 1});
        for (std::size_t j = 0; j < t; ++j) {
            if (dtable[i][j] != 0) row.push_back({j, Rational(-dtable[i][j])});
        }
        p.add_row(std::move(row), Rel::Eq, 0);
    }
    // one zero codeword
    p.add_row({{x_idx(0, 0, 0), 1}}, Rel::Eq, 1);
    // resilience
    for (std::size_t i = 0; i < t; ++i) {
        const auto& [d, e, f] = triples[i];
        if (d + e >= 1 && d + e <= params.beta1) p.add_row({{i, 1}}, Rel::Eq, 0);
    }
    for (unsigned d = 1; d <= params.beta2 && d <= n; ++d) {
        p.add_row({{x_idx(d, 0, 0), 1}}, Rel::Eq, 0);
    }
    auto grand_total = [&](std::vector<std::pair<std::size_t, Rational>>& row) {
        for (std::size_t j = 0; j < t; ++j)
            row.push_back({j, Rational(-(long(q) - 1) * weight[j])});
    };
    // intra locality (one orbit row replaces the whole (i, gamma) family;
    // gamma1 >= n leaves no valid (i, gamma) pair and hence no row)
    if (params.r1 >= 1 && params.Gamma1 < n) {
        std::vector<std::pair<std::size_t, Rational>> row;
        unsigned d_lo = options.include_weight1_dual_term ? 1 : 2;
        for (unsigned d = d_lo; d <= params.r1 + 1 && d <= n; ++d) {
            mpz_class coef = delta2(d, n, params.Gamma1);
            if (coef != 0) row.push_back({t + x_idx(d, 0, 0), Rational(coef)});
        }
        grand_total(row);
        p.add_row(std::move(row), Rel::Ge, 0);
    }
    // inter locality
    if (params.a >= 1 && params.Gamma2 < n) {
        std::vector<std::pair<std::size_t, Rational>> row;
        for (std::size_t i = 0; i < t; ++i) {
            const auto& [d, e, f] = triples[i];
            if (d + e > params.r2 + 1 || e + f > params.a) continue;
            mpz_class coef = delta3(d, e, f, n, params.Gamma2);
            if (coef != 0) row.push_back({t + i, Rational(coef)});
        }
        grand_total(row);
        p.add_row(std::move(row), Rel::Ge, 0);
    }
    // fixed x-only mass, orbit-weighted
    {
        std::vector<std::pair<std::size_t, Rational>> row;
        for (unsigned d = 0; d <= n; ++d) {
            row.push_back({x_idx(d, 0, 0), Rational(binomial(n, d))});
        }
        p.add_row(std::move(row), Rel::Eq, Rational(o1));
    }
    return p;
}

double log_q(unsigned q, const Rational& v) {
    if (v <= 0) throw Error("log of a non-positive value");
    signed long num_exp = 0, den_exp = 0;
    double num_d = mpz_get_d_2exp(&num_exp, v.get_num().get_mpz_t());
    double den_d = mpz_get_d_2exp(&den_exp, v.get_den().get_mpz_t());
    double ln2 = std::log(2.0);
    double ln_v = (std::log(num_d) + double(num_exp) * ln2) -
                  (std::log(den_d) + double(den_exp) * ln2);
    return ln_v / std::log(double(q));
}

BoundReport rate_upper_bound(unsigned n, unsigned m, unsigned l, unsigned q,
                             const CodeClassParams& params, const Lp2Options& options) {
    BoundReport report;
    for (unsigned i = 0; i <= n; ++i) {
        mpz_class o1;
        mpz_ui_pow_ui(o1.get_mpz_t(), q, i);
        LPProblem p = build_lp2(n, q, params, o1, options);
        LPSolution sol = simplex_solve(p);
        BoundEntry entry;
        entry.i = i;
        entry.status = sol.status;
        if (sol.status == LPStatus::Optimal) {
            entry.o_star = sol.value;
            entry.bound = double(i) / n +
                          double(m - l) / double(m * n) * (log_q(q, sol.value) - 2.0 * i);
            if (!report.any_feasible || entry.bound > report.best) {
                report.best = entry.bound;
                report.best_i = i;
            }
            report.any_feasible = true;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace rackcode
