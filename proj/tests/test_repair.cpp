#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "rackcode/repair.hpp"

using namespace rackcode;

namespace {

// Independent span scan: coefficient loops over the raw rows, no rref, no
// iterator machinery. Oracle for repair_groups and min_distance.
std::vector<Vec> bruteforce_span(const Matrix& m) {
    const Gf& f = m.field();
    uint64_t count = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) count *= f.q();
    std::vector<Vec> out;
    for (uint64_t idx = 0; idx < count; ++idx) {
        Vec v(m.cols(), 0);
        uint64_t rem = idx;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            uint16_t coef = uint16_t(rem % f.q());
            rem /= f.q();
            if (coef != 0) v = add_vec(f, v, scale_vec(f, coef, m.row(i)));
        }
        out.push_back(v);
    }
    return out;
}

std::set<std::set<std::size_t>> groups_at(const Matrix& h, std::size_t j) {
    std::set<std::set<std::size_t>> out;
    for (const Vec& u : bruteforce_span(h)) {
        if (u[j] == 0) continue;
        std::set<std::size_t> s;
        for (std::size_t i : support(u))
            if (i != j) s.insert(i);
        out.insert(s);
    }
    return out;
}

// Restores every failed symbol in place by running the schedule's plans.
void apply_schedule(ErasedMatrix& observed, const RepairSchedule& sched) {
    for (const InterRepairPlan& p : sched.inter) {
        observed.restore(p.rack, p.node, execute_repair(observed, p));
    }
    for (const IntraRepairPlan& p : sched.intra) {
        observed.restore(p.rack, p.node, execute_repair(observed, p));
    }
}

const Vec kInterRow2 = {0, 1, 1, 0, 1, 0, 1, 1};  // second row of inter8()

}  // namespace

TEST_CASE("min_distance of standard parities") {
    Gf f2(2);
    CHECK(min_distance(Matrix::from_rows(f2, {{1, 1, 1, 1}}, 4)) == 2);
    CHECK(min_distance(fixtures::intra8()) == 4);
    CHECK(min_distance(Matrix::identity(f2, 4)) == kInfiniteDistance);
    CHECK(min_distance(fixtures::intra4_gf3()) == 3);
}

TEST_CASE("repair groups of the eight-node intra parity at node 0") {
    std::set<std::set<std::size_t>> got = repair_groups(fixtures::intra8(), Vec{}, 0);
    std::set<std::set<std::size_t>> want = {
        {1, 2, 4}, {1, 3, 5}, {2, 3, 7}, {1, 6, 7},
        {2, 5, 6}, {3, 4, 6}, {4, 5, 7}, {1, 2, 3, 4, 5, 6, 7}};
    CHECK(got == want);
    CHECK(got == groups_at(fixtures::intra8(), 0));
}

TEST_CASE("repair groups of the ternary parity at node 0") {
    std::set<std::set<std::size_t>> got = repair_groups(fixtures::intra4_gf3(), Vec{}, 0);
    std::set<std::set<std::size_t>> want = {{2, 3}, {1, 2}, {1, 3}};
    CHECK(got == want);
}

TEST_CASE("repair groups of a zero matrix are empty") {
    CHECK(repair_groups(Matrix(Gf(2), 2, 4), Vec{}, 1).empty());
}

TEST_CASE("repair groups round-trip against the raw span for random matrices") {
    std::mt19937_64 rng(99);
    for (unsigned q : {2u, 3u}) {
        Gf f(q);
        for (int trial = 0; trial < 10; ++trial) {
            Matrix m(f, 2 + rng() % 2, 5);
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = uint16_t(rng() % q);
            for (std::size_t j = 0; j < 5; ++j) {
                CHECK(repair_groups(m, Vec{}, j) == groups_at(m, j));
            }
        }
    }
}

TEST_CASE("intra plan for the ternary example recovers with the expected coefficients") {
    IntraRepairPlan plan = plan_intra_repair(fixtures::intra4_gf3(), {0, 1}, 0);
    CHECK(plan.beta == std::set<std::size_t>{2, 3});
    // -1 and -2 in canonical GF(3) residues
    CHECK(plan.coeffs == std::map<std::size_t, uint16_t>{{2, 2}, {3, 1}});

    // the plan reproduces the erased symbol on all 9 codewords of the toy code
    CodeSpec spec = fixtures::single_rack_gf3_spec();
    for (const Matrix& x : enumerate_codebook(spec)) {
        ErasedMatrix observed = ErasedMatrix::erase(x, 0, {0, 1});
        CHECK(execute_repair(observed, plan) == x.at(0, 0));
    }
}

TEST_CASE("intra planning fails when all groups are hit") {
    CHECK_THROWS_AS(plan_intra_repair(fixtures::intra8(), {0, 1, 3, 5}, 0), NoLocalGroup);
    CHECK(!try_plan_intra_repair(fixtures::intra8(), {0, 1, 3, 5}, 0).has_value());
}

TEST_CASE("intra planning always succeeds strictly below the minimum distance") {
    for (const Matrix& h : {fixtures::intra8(), fixtures::intra4_gf3()}) {
        std::size_t dist = min_distance(h);
        std::size_t n = h.cols();
        // every failed set of size < dist, every node in it
        std::vector<std::size_t> gamma_stack;
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if (!gamma_stack.empty()) {
                std::set<std::size_t> gamma(gamma_stack.begin(), gamma_stack.end());
                for (std::size_t j : gamma) {
                    CHECK(try_plan_intra_repair(h, gamma, j).has_value());
                }
            }
            if (gamma_stack.size() + 1 >= dist) return;
            for (std::size_t next = start; next < n; ++next) {
                gamma_stack.push_back(next);
                self(self, next + 1);
                gamma_stack.pop_back();
            }
        };
        rec(rec, 0);
    }
}

TEST_CASE("pinned helper-rack plan for the five-rack sample network") {
    CodeSpec spec = fixtures::five_rack_spec();
    std::set<std::size_t> gamma = {0, 1, 3, 5};
    PlanPolicy pin;
    pin.force_r = kInterRow2;
    pin.force_beta = std::set<std::size_t>{6, 7};
    pin.force_tau = std::set<std::size_t>{1, 2, 3};
    InterRepairPlan plan = plan_inter_repair(spec, 0, gamma, 0, pin);

    CHECK(plan.r == kInterRow2);
    CHECK(plan.mu == std::set<std::size_t>{1, 2, 4, 6, 7});
    CHECK(plan.beta == std::set<std::size_t>{6, 7});
    CHECK(plan.tau == std::set<std::size_t>{1, 2, 3});
    CHECK(plan.coeffs_c == std::map<std::size_t, uint16_t>{{6, 1}, {7, 1}});
    for (std::size_t m = 0; m < 5; ++m) {
        for (std::size_t s = 0; s < 8; ++s) {
            uint16_t want = (m >= 1 && m <= 3) ? kInterRow2[s] : 0;
            CHECK(plan.coeffs_d.at(m, s) == want);
        }
    }
    NodeCost cost = plan_cost(plan);
    CHECK(cost.intra == 18);  // 2 + 5*3 + 1
    CHECK(cost.inter == 3);

    // recovery holds on sampled codewords
    CodewordSampler sampler(spec);
    std::mt19937_64 rng(2025);
    for (int i = 0; i < 50; ++i) {
        Matrix x = sampler.sample(rng);
        ErasedMatrix observed = ErasedMatrix::erase(x, 0, gamma);
        CHECK(execute_repair(observed, plan) == x.at(0, 0));
    }
}

TEST_CASE("default helper-rack plan is valid and at least as cheap as the pinned one") {
    CodeSpec spec = fixtures::five_rack_spec();
    std::set<std::size_t> gamma = {0, 1, 3, 5};
    InterRepairPlan plan = plan_inter_repair(spec, 0, gamma, 0);
    CHECK(!plan.degenerate());
    for (std::size_t b : plan.beta) CHECK(!gamma.count(b));
    uint64_t objective = plan.tau.size() * plan.mu.size() + plan.beta.size();
    CHECK(objective <= 17);  // pinned plan scores 3*5 + 2

    CodewordSampler sampler(spec);
    std::mt19937_64 rng(77);
    for (int i = 0; i < 50; ++i) {
        Matrix x = sampler.sample(rng);
        ErasedMatrix observed = ErasedMatrix::erase(x, 0, gamma);
        CHECK(execute_repair(observed, plan) == x.at(0, 0));
    }
}

TEST_CASE("helper-rack planning degenerates to intra repair when possible") {
    CodeSpec spec = fixtures::five_rack_spec();
    InterRepairPlan plan = plan_inter_repair(spec, 0, {0}, 0);
    CHECK(plan.degenerate());
    CHECK(plan.tau.empty());
    CHECK(plan.mu.empty());
    CHECK(plan.beta.size() == 3);  // smallest repair group at node 0
}

TEST_CASE("whole-rack loss without inter parity is unrepairable") {
    Gf f(2);
    CodeSpec spec(f, 2, 4, Matrix::from_rows(f, {{1, 1, 1, 1}}, 4), Matrix(f, 0, 4),
                  canonical_two_rack_g(f));
    std::set<std::size_t> all = {0, 1, 2, 3};
    CHECK_THROWS_AS(plan_inter_repair(spec, 0, all, 0), Unrepairable);
    CHECK_THROWS_AS(repair_all(spec, FailurePattern{0, all}), Unrepairable);
}

TEST_CASE("executing a plan with a missing helper symbol fails loudly") {
    CodeSpec spec = fixtures::single_rack_gf3_spec();
    IntraRepairPlan plan = plan_intra_repair(spec.h, {0}, 0);
    Matrix x = enumerate_codebook(spec)[4];
    std::set<std::size_t> erased = {0};
    erased.insert(*plan.beta.begin());
    ErasedMatrix observed = ErasedMatrix::erase(x, 0, erased);
    CHECK_THROWS_AS(execute_repair(observed, plan), MissingHelperSymbol);
}

TEST_CASE("repair_all uses only intra plans below the minimum distance") {
    CodeSpec spec = fixtures::five_rack_spec();
    RepairSchedule sched = repair_all(spec, FailurePattern{0, {2}});
    CHECK(sched.inter.empty());
    CHECK(sched.intra.size() == 1);
    CHECK(sched.cost.theta_inter == 0);
    CHECK(sched.cost.bound_inter == 0);
    CHECK(sched.cost.theta_intra <= sched.cost.bound_intra);
}

TEST_CASE("repair_all on the four-failure sample scenario") {
    CodeSpec spec = fixtures::five_rack_spec();
    FailurePattern failure{0, {0, 1, 3, 5}};
    RepairSchedule sched = repair_all(spec, failure);

    CHECK(sched.alpha == std::set<std::size_t>{0, 1, 3});  // first feasible split
    CHECK(sched.inter.size() == 1);
    CHECK(sched.inter[0].node == 5);
    CHECK(sched.tau == std::set<std::size_t>{2});  // smallest helper group
    CHECK(sched.cost.theta_intra <= sched.cost.bound_intra);
    CHECK(sched.cost.theta_inter <= sched.cost.bound_inter);

    CodewordSampler sampler(spec);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        Matrix x = sampler.sample(rng);
        ErasedMatrix observed = ErasedMatrix::erase(x, 0, failure.failed);
        apply_schedule(observed, sched);
        CHECK(observed.values == x);
    }
}

TEST_CASE("two failures sharing one inter-parity vector are counted once") {
    Gf f(2);
    // kernel of H contains a weight-1 word, so every failure set goes through
    // the helper phase; K has a single row serving both failed nodes
    CodeSpec spec(f, 2, 5, Matrix::from_rows(f, {{1, 1, 1, 1, 0}}, 5),
                  Matrix::from_rows(f, {{1, 0, 1, 0, 0}}, 5), canonical_two_rack_g(f));
    FailurePattern failure{0, {0, 1}};
    RepairSchedule sched = repair_all(spec, failure);
    CHECK(sched.alpha.empty());
    CHECK(sched.inter.size() == 2);
    for (const InterRepairPlan& p : sched.inter) {
        CHECK(!p.degenerate());
        CHECK(p.r == Vec{1, 0, 1, 0, 0});
    }
    CHECK(sched.cost.theta_inter == 1);  // one helper rack, one independent vector
    CHECK(sched.cost.bound_inter == 1);

    CodewordSampler sampler(spec);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        Matrix x = sampler.sample(rng);
        ErasedMatrix observed = ErasedMatrix::erase(x, 0, failure.failed);
        apply_schedule(observed, sched);
        CHECK(observed.values == x);
    }
}

TEST_CASE("overlapping repair groups tighten the intra bound below the naive sum") {
    Matrix h = fixtures::intra4_gf3();
    std::set<std::size_t> gamma = {0, 1};
    IntraRepairPlan p0 = plan_intra_repair(h, gamma, 0);
    IntraRepairPlan p1 = plan_intra_repair(h, gamma, 1);
    CHECK(p0.beta == p1.beta);  // both lean on nodes {2,3}
    CostReport rep = cost_bounds({}, {p0, p1}, gamma, gamma);
    CHECK(rep.bound_intra == 2 + 2);  // union of groups + |gamma|
    CHECK(rep.bound_intra < p0.beta.size() + p1.beta.size() + gamma.size());
}

TEST_CASE("helper sums cancel on the parity side for every codeword") {
    CodeSpec spec = fixtures::five_rack_spec();
    const Gf& f = spec.field;
    CodewordSampler sampler(spec);
    std::mt19937_64 rng(31337);
    for (const Vec& r : row_space(spec.k)) {
        for (int i = 0; i < 5; ++i) {
            Matrix x = sampler.sample(rng);
            Vec psi(spec.racks, 0);
            for (std::size_t m = 0; m < spec.racks; ++m) psi[m] = dot(f, r, x.row(m));
            CHECK(is_zero(mat_vec(f, spec.g, psi)));
        }
    }
}
