#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "fixtures.hpp"
#include "rackcode/enumerator.hpp"
#include "rackcode/repair.hpp"

using namespace rackcode;

namespace {

Matrix random_matrix(Gf f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = uint16_t(rng() % f.q());
    return m;
}

TwoRackCode sample_pair() { return two_rack_code(fixtures::intra8(), fixtures::inter8()); }

// exponent e with value == q^e, or -1 if not a power
long long log_exact(unsigned q, long long value) {
    long long e = 0;
    while (value > 1) {
        if (value % q != 0) return -1;
        value /= q;
        ++e;
    }
    return value == 1 ? e : -1;
}

}  // namespace

TEST_CASE("kappa three-case kernel") {
    for (unsigned q : {2u, 3u, 5u}) {
        CHECK(kappa(q, 0, 0) == 1);
        CHECK(kappa(q, 1, 0) == 1);
        CHECK(kappa(q, 0, 1) == int(q) - 1);
        CHECK(kappa(q, 1, 1) == -1);
    }
}

TEST_CASE("support enumerator of degenerate and tiny codes") {
    Gf f(2);
    TwoRackCode zero = two_rack_code(Matrix::identity(f, 2), Matrix(f, 0, 2));
    EnumeratorTable zt = support_enumerator(zero);
    CHECK(zt.total() == 1);
    CHECK(zt.count(0, 0) == 1);

    TwoRackCode pairwise = two_rack_code(Matrix::from_rows(f, {{1, 1}}, 2),
                                         Matrix::from_rows(f, {{1, 0}}, 2));
    EnumeratorTable pt = support_enumerator(pairwise);
    CHECK(pt.total() == 2);
    CHECK(pt.count(0, 0) == 1);
    CHECK(pt.count(3, 3) == 1);

    EnumeratorTable st = support_enumerator(sample_pair());
    CHECK(st.total() == 64);
    CHECK(st.count(0, 0) == 1);
}

TEST_CASE("enumerator symmetry counts(w,s) == counts(s,w)") {
    EnumeratorTable t = support_enumerator(sample_pair());
    for (const auto& [ws, cnt] : t.entries()) {
        CHECK(t.count(ws.second, ws.first) == cnt);
    }
}

TEST_CASE("brute-force dual of a single parity row") {
    Gf f(2);
    EnumeratorTable dual = dual_bruteforce(Matrix::from_rows(f, {{1, 1}}, 2), Matrix(f, 0, 2));
    CHECK(dual.total() == 4);
    CHECK(dual.count(0, 0) == 1);
    CHECK(dual.count(3, 0) == 1);
    CHECK(dual.count(0, 3) == 1);
    CHECK(dual.count(3, 3) == 1);

    EnumeratorTable trivial = dual_bruteforce(Matrix(f, 0, 2), Matrix(f, 0, 2));
    CHECK(trivial.total() == 1);
    CHECK(trivial.count(0, 0) == 1);
}

TEST_CASE("transform of the full space and of the zero code") {
    Gf f(2);
    TwoRackCode full = two_rack_code(Matrix(f, 0, 2), Matrix(f, 0, 2));
    EnumeratorTable dual = macwilliams_dual(support_enumerator(full));
    CHECK(dual.total() == 1);
    CHECK(dual.count(0, 0) == 1);

    TwoRackCode zero = two_rack_code(Matrix::identity(f, 2), Matrix::identity(f, 2));
    EnumeratorTable zero_dual = macwilliams_dual(support_enumerator(zero));
    CHECK(zero_dual.total() == 16);  // dual of the zero code is everything
    EnumeratorTable full_table = support_enumerator(full);
    CHECK(zero_dual == full_table);
}

TEST_CASE("transform equals the brute-force dual on the sample pair") {
    EnumeratorTable via_transform = macwilliams_dual(support_enumerator(sample_pair()));
    EnumeratorTable via_span = dual_bruteforce(fixtures::intra8(), fixtures::inter8());
    CHECK(via_transform == via_span);
    CHECK(via_transform.total() == 1024);  // q^(2*S1 + S2)
}

TEST_CASE("applying the transform twice returns the original") {
    Gf f2(2);
    for (const TwoRackCode& code :
         {sample_pair(), two_rack_code(Matrix::from_rows(f2, {{1, 1, 1}}, 3),
                                       Matrix::from_rows(f2, {{1, 0, 1}}, 3))}) {
        EnumeratorTable table = support_enumerator(code);
        EnumeratorTable twice = macwilliams_dual(macwilliams_dual(table));
        CHECK(twice == table);
    }
}

TEST_CASE("transform rejects tables that are not code enumerators") {
    EnumeratorTable bogus(2, 2);
    bogus.add(1, 0, 1);  // no zero codeword, weight-1 mass only
    bogus.add(0, 0, 2);
    CHECK_THROWS_AS(macwilliams_dual(bogus), NonIntegerDual);
}

TEST_CASE("x-only mass and grand total are the expected field powers") {
    EnumeratorTable t = support_enumerator(sample_pair());
    long long x_only = 0;
    for (const auto& [ws, cnt] : t.entries())
        if (ws.second == 0) x_only += cnt;
    CHECK(log_exact(2, x_only) == 2);      // N - S1 - S2 = 8 - 4 - 2
    CHECK(log_exact(2, t.total()) == 6);   // 2N - 2 S1 - S2

    // rate reconstructed from the enumerator matches the dimension formula
    Gf f(2);
    CodeSpec spec(f, 2, 8, fixtures::intra8(), fixtures::inter8(), canonical_two_rack_g(f));
    RateReport rate = code_rate(spec);
    long e1 = long(log_exact(2, x_only)), e2 = long(log_exact(2, t.total()));
    Rational reconstructed(e1, 8);
    reconstructed += Rational(e2 - 2 * e1, 16);
    reconstructed.canonicalize();
    CHECK(reconstructed == rate.exact);
}

TEST_CASE("transform equals the brute-force dual on random pairs") {
    std::mt19937_64 rng(4242);
    for (unsigned q : {2u, 3u}) {
        Gf f(q);
        for (int trial = 0; trial < 12; ++trial) {
            std::size_t n = 2 + rng() % 5;  // up to 6 nodes
            Matrix h = random_matrix(f, 1 + rng() % 2, n, rng);
            Matrix k = random_matrix(f, 1 + rng() % 2, n, rng);
            TwoRackCode code = two_rack_code(h, k);
            EnumeratorTable table = support_enumerator(code);
            CHECK(macwilliams_dual(table) == dual_bruteforce(h, k));
            CHECK(macwilliams_dual(macwilliams_dual(table)) == table);
        }
    }
}

TEST_CASE("certify: vacuous all-zero claim and symmetry") {
    CertReport rep = certify(sample_pair(), CodeClassParams{});
    CHECK(rep.all_pass());
    CHECK(!rep.intra_locality.checked);
    CHECK(!rep.inter_locality.checked);
    CHECK(rep.symmetry.pass);
    CHECK(!rep.quantifier_note.empty());
}

TEST_CASE("certify intra resilience tracks the minimum distance") {
    std::size_t dist = min_distance(fixtures::intra8());
    CodeClassParams below;
    below.beta1 = unsigned(dist) - 1;
    CHECK(certify(sample_pair(), below).intra_resilience.pass);

    CodeClassParams at;
    at.beta1 = unsigned(dist);
    CertReport rep = certify(sample_pair(), at);
    CHECK(!rep.intra_resilience.pass);
    CHECK(!rep.intra_resilience.witness.empty());
}

TEST_CASE("certify intra resilience on the single-parity toy code") {
    Gf f(2);
    TwoRackCode toy = two_rack_code(Matrix::from_rows(f, {{1, 1, 1, 1}}, 4), Matrix(f, 0, 4));
    CodeClassParams params;
    params.beta1 = 1;
    CHECK(certify(toy, params).intra_resilience.pass);
    params.beta1 = 2;
    CHECK(!certify(toy, params).intra_resilience.pass);
}

TEST_CASE("certify locality on replication across racks") {
    Gf f(2);
    // x must equal y; each node is recoverable from its mirror alone
    TwoRackCode mirror = two_rack_code(Matrix(f, 0, 3), Matrix::identity(f, 3));
    CodeClassParams params;
    params.Gamma2 = 1;
    params.r2 = 0;
    params.a = 1;
    CertReport rep = certify(mirror, params);
    CHECK(rep.inter_locality.checked);
    CHECK(rep.inter_locality.pass);

    // no intra structure at all: an intra-locality claim must fail
    params.r1 = 1;
    params.Gamma1 = 0;
    CertReport rep2 = certify(mirror, params);
    CHECK(rep2.intra_locality.checked);
    CHECK(!rep2.intra_locality.pass);
}

TEST_CASE("certify inter resilience fails when x-only words are small") {
    Gf f(2);
    // K = 0 leaves (x, 0) codewords of weight Dist(H)
    TwoRackCode no_k = two_rack_code(Matrix::from_rows(f, {{1, 1, 1, 1}}, 4), Matrix(f, 0, 4));
    CodeClassParams params;
    params.beta2 = 2;
    CHECK(!certify(no_k, params).inter_resilience.pass);

    TwoRackCode strong = sample_pair();
    params.beta2 = 3;
    CHECK(certify(strong, params).inter_resilience.pass);
}

TEST_CASE("certified claims are realizable by the repair planners") {
    Gf f(2);
    struct Case {
        TwoRackCode code;
        CodeClassParams params;
    };
    std::vector<Case> cases;
    {
        CodeClassParams p;
        p.beta1 = 3;
        p.Gamma1 = 1;
        p.r1 = 3;
        p.beta2 = 3;
        cases.push_back({sample_pair(), p});
    }
    {
        CodeClassParams p;
        p.beta2 = 1;
        p.Gamma2 = 1;
        p.r2 = 0;
        p.a = 1;
        cases.push_back({two_rack_code(Matrix(f, 0, 3), Matrix::identity(f, 3)), p});
    }
    for (const Case& c : cases) {
        CertReport rep = certify(c.code, c.params);
        REQUIRE(rep.all_pass());
        const std::size_t n = c.code.nodes;
        CodeSpec spec(c.code.field, 2, n, c.code.h, c.code.k,
                      canonical_two_rack_g(c.code.field));

        // resilience: every failure set of the stated size is schedulable
        auto all_sets = [&](unsigned size, auto&& fn) {
            std::vector<std::size_t> pick(size);
            for (unsigned i = 0; i < size; ++i) pick[i] = i;
            if (size == 0 || size > n) return;
            while (true) {
                std::set<std::size_t> gamma(pick.begin(), pick.end());
                fn(gamma);
                unsigned idx = size;
                bool advanced = false;
                while (idx > 0) {
                    --idx;
                    if (pick[idx] + (size - idx) < n) {
                        ++pick[idx];
                        for (unsigned j = idx + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
                        advanced = true;
                        break;
                    }
                }
                if (!advanced) return;
            }
        };
        if (c.params.beta1 > 0) {
            all_sets(c.params.beta1, [&](const std::set<std::size_t>& gamma) {
                for (std::size_t j : gamma)
                    CHECK(try_plan_intra_repair(c.code.h, gamma, j).has_value());
            });
        }
        if (c.params.beta2 > 0) {
            all_sets(c.params.beta2, [&](const std::set<std::size_t>& gamma) {
                for (std::size_t j : gamma)
                    CHECK(try_plan_inter_repair(spec, 0, gamma, j).has_value());
            });
        }
        if (c.params.r1 > 0) {
            all_sets(c.params.Gamma1 + 1, [&](const std::set<std::size_t>& gamma) {
                for (std::size_t j : gamma) {
                    bool found = false;
                    for (const auto& beta : repair_groups(c.code.h, Vec{}, j)) {
                        bool clear = true;
                        for (std::size_t b : beta)
                            if (gamma.count(b)) clear = false;
                        if (clear && beta.size() <= c.params.r1) found = true;
                    }
                    CHECK(found);
                }
            });
        }
        if (c.params.a > 0) {
            all_sets(c.params.Gamma2 + 1, [&](const std::set<std::size_t>& gamma) {
                for (std::size_t j : gamma) {
                    auto plan = try_plan_inter_repair(spec, 0, gamma, j);
                    REQUIRE(plan.has_value());
                    CHECK(plan->beta.size() <= c.params.r2);
                }
            });
        }
    }
}
