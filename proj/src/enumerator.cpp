#include "rackcode/enumerator.hpp"

#include <algorithm>
#include <bit>

namespace rackcode {

namespace {

uint32_t support_mask(const Vec& v) {
    uint32_t mask = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) mask |= uint32_t(1) << i;
    return mask;
}

std::string mask_to_string(uint32_t mask) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        if (mask & (uint32_t(1) << i)) {
            if (!first) out += ",";
            out += std::to_string(i + 1);
            first = false;
        }
    }
    return out + "}";
}

/// Calls fn(gamma_mask) for every subset of `allowed` with exactly k bits.
template <typename Fn>
void for_each_subset_of_size(uint32_t allowed, unsigned k, Fn&& fn) {
    std::vector<int> positions;
    for (int i = 0; i < 32; ++i)
        if (allowed & (uint32_t(1) << i)) positions.push_back(i);
    if (k > positions.size()) return;
    std::vector<unsigned> pick(k);
    for (unsigned i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        uint32_t mask = 0;
        for (unsigned i : pick) mask |= uint32_t(1) << positions[i];
        fn(mask);
        unsigned idx = k;
        while (idx > 0) {
            --idx;
            if (pick[idx] + (k - idx) < positions.size()) {
                ++pick[idx];
                for (unsigned j = idx + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (idx == 0) return;
        }
        if (k == 0) return;
    }
}

}  // namespace

int kappa(unsigned q, int u, int v) {
    if (v == 0) return 1;
    if (u == 0) return int(q) - 1;
    return -1;
}

EnumeratorTable::EnumeratorTable(std::size_t n, unsigned q) : n_(n), q_(q) {
    if (n <= kDenseLimit) dense_.assign(std::size_t(1) << (2 * n), 0);
}

long long EnumeratorTable::count(uint32_t w, uint32_t s) const {
    if (!dense_.empty()) return dense_[key(w, s)];
    auto it = sparse_.find(key(w, s));
    return it == sparse_.end() ? 0 : it->second;
}

void EnumeratorTable::add(uint32_t w, uint32_t s, long long delta) {
    if (delta == 0) return;
    if (!dense_.empty()) {
        dense_[key(w, s)] += delta;
    } else {
        sparse_[key(w, s)] += delta;
        if (sparse_[key(w, s)] == 0) sparse_.erase(key(w, s));
    }
    total_ += delta;
}

std::vector<std::pair<std::pair<uint32_t, uint32_t>, long long>> EnumeratorTable::entries()
    const {
    std::vector<std::pair<std::pair<uint32_t, uint32_t>, long long>> out;
    auto push = [&](uint64_t k, long long v) {
        if (v != 0) out.push_back({{uint32_t(k >> n_), uint32_t(k & ((uint64_t(1) << n_) - 1))}, v});
    };
    if (!dense_.empty()) {
        for (uint64_t k = 0; k < dense_.size(); ++k) push(k, dense_[k]);
    } else {
        for (const auto& [k, v] : sparse_) push(k, v);
    }
    return out;
}

bool EnumeratorTable::operator==(const EnumeratorTable& other) const {
    return n_ == other.n_ && q_ == other.q_ && entries() == other.entries();
}

EnumeratorTable support_enumerator(const TwoRackCode& code) {
    EnumeratorTable table(code.nodes, code.field.q());
    for (const auto& [x, y] : code.codebook) {
        table.add(support_mask(x), support_mask(y), 1);
    }
    return table;
}

EnumeratorTable macwilliams_dual(const EnumeratorTable& table) {
    const std::size_t n = table.n();
    const unsigned q = table.q();
    if (n > EnumeratorTable::kDenseLimit) {
        throw CodebookTooLarge("transform needs a dense table (n <= 12)");
    }
    if (table.total() <= 0) throw NonIntegerDual("enumerator total must be positive");

    const std::size_t cells = std::size_t(1) << (2 * n);
    std::vector<__int128> work(cells, 0);
    for (const auto& [ws, cnt] : table.entries()) {
        work[(uint64_t(ws.first) << n) | ws.second] = cnt;
    }

    // one pass per node position: 4-point transform over (w bit j, s bit j),
    // covering the kappa factor of every position including those outside
    // both supports
    const __int128 qm1 = q - 1;
    for (std::size_t j = 0; j < n; ++j) {
        const uint64_t sbit = uint64_t(1) << j;
        const uint64_t wbit = uint64_t(1) << (n + j);
        for (uint64_t idx = 0; idx < cells; ++idx) {
            if (idx & sbit || idx & wbit) continue;
            __int128 a00 = work[idx];
            __int128 a01 = work[idx | sbit];
            __int128 a10 = work[idx | wbit];
            __int128 a11 = work[idx | wbit | sbit];
            work[idx] = a00 + a01 + a10 + a11;
            work[idx | sbit] = qm1 * (a00 + a10) - (a01 + a11);
            work[idx | wbit] = qm1 * (a00 + a01) - (a10 + a11);
            work[idx | wbit | sbit] = qm1 * qm1 * a00 - qm1 * a01 - qm1 * a10 + a11;
        }
    }

    EnumeratorTable dual(n, q);
    const __int128 total = table.total();
    for (uint64_t idx = 0; idx < cells; ++idx) {
        if (work[idx] == 0) continue;
        if (work[idx] % total != 0 || work[idx] < 0) {
            throw NonIntegerDual("input is not the enumerator of a linear code");
        }
        __int128 v = work[idx] / total;
        dual.add(uint32_t(idx >> n), uint32_t(idx & ((uint64_t(1) << n) - 1)),
                 (long long)(v));
    }
    return dual;
}

EnumeratorTable dual_bruteforce(const Matrix& h, const Matrix& k, uint64_t cap) {
    if (h.rows() > 0 && k.rows() > 0 && h.cols() != k.cols())
        throw DimensionMismatch("H and K must have the same number of columns");
    const Gf f = h.field();
    const std::size_t n = h.rows() > 0 ? h.cols() : k.cols();

    Matrix gens(f, 2 * h.rows() + k.rows(), 2 * n);
    std::size_t row = 0;
    for (std::size_t i = 0; i < h.rows(); ++i, ++row)
        for (std::size_t c = 0; c < n; ++c) gens.at(row, c) = h.at(i, c);
    for (std::size_t i = 0; i < h.rows(); ++i, ++row)
        for (std::size_t c = 0; c < n; ++c) gens.at(row, n + c) = h.at(i, c);
    for (std::size_t i = 0; i < k.rows(); ++i, ++row) {
        for (std::size_t c = 0; c < n; ++c) {
            gens.at(row, c) = k.at(i, c);
            gens.at(row, n + c) = f.neg(k.at(i, c));
        }
    }

    EnumeratorTable table(n, f.q());
    for (const Vec& v : row_space(gens, cap)) {
        uint32_t w = 0, s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] != 0) w |= uint32_t(1) << i;
            if (v[n + i] != 0) s |= uint32_t(1) << i;
        }
        table.add(w, s, 1);
    }
    return table;
}

CertReport certify(const TwoRackCode& code, const CodeClassParams& params) {
    const std::size_t n = code.nodes;
    const unsigned q = code.field.q();
    const uint32_t full = n == 32 ? ~uint32_t(0) : (uint32_t(1) << n) - 1;
    EnumeratorTable table = support_enumerator(code);
    EnumeratorTable dual = macwilliams_dual(table);

    CertReport rep;
    rep.quantifier_note =
        "locality checks range over every pair (i, gamma) with i not in gamma "
        "and |gamma| equal to the stated failure count";

    for (uint32_t w = 0; w <= full && rep.symmetry.pass; ++w) {
        for (uint32_t s = 0; s <= full; ++s) {
            if (table.count(w, s) != table.count(s, w)) {
                rep.symmetry.pass = false;
                rep.symmetry.witness = "counts differ at (" + mask_to_string(w) + "," +
                                       mask_to_string(s) + ")";
                break;
            }
        }
    }

    for (uint32_t w = 1; w <= full && rep.intra_resilience.pass; ++w) {
        unsigned wt = unsigned(std::popcount(w));
        if (wt < 1 || wt > params.beta1) continue;
        for (uint32_t s = 0; s <= full; ++s) {
            if (table.count(w, s) != 0) {
                rep.intra_resilience.pass = false;
                rep.intra_resilience.witness =
                    std::to_string(table.count(w, s)) + " codeword(s) with support (" +
                    mask_to_string(w) + "," + mask_to_string(s) + ")";
                break;
            }
        }
    }

    for (uint32_t w = 1; w <= full; ++w) {
        unsigned wt = unsigned(std::popcount(w));
        if (wt < 1 || wt > params.beta2) continue;
        if (table.count(w, 0) != 0) {
            rep.inter_resilience.pass = false;
            rep.inter_resilience.witness = std::to_string(table.count(w, 0)) +
                                           " codeword(s) with support (" + mask_to_string(w) +
                                           ",{})";
            break;
        }
    }

    if (params.r1 == 0) {
        rep.intra_locality.checked = false;
        rep.intra_locality.witness = "not claimed (r1 = 0)";
    } else {
        for (std::size_t i = 0; i < n && rep.intra_locality.pass; ++i) {
            uint32_t ibit = uint32_t(1) << i;
            for_each_subset_of_size(full & ~ibit, params.Gamma1, [&](uint32_t gamma) {
                if (!rep.intra_locality.pass) return;
                long long mass = 0;
                uint32_t allowed = full & ~gamma & ~ibit;
                for (unsigned extra = 0; extra + 1 <= params.r1 + 1 && extra <= n; ++extra) {
                    for_each_subset_of_size(allowed, extra, [&](uint32_t rest) {
                        mass += dual.count(ibit | rest, 0);
                    });
                }
                if (mass < (long long)(q) - 1) {
                    rep.intra_locality.pass = false;
                    rep.intra_locality.witness =
                        "dual mass " + std::to_string(mass) + " < q-1 at node " +
                        std::to_string(i + 1) + ", failed set " + mask_to_string(gamma);
                }
            });
        }
    }

    if (params.a == 0) {
        rep.inter_locality.checked = false;
        rep.inter_locality.witness = "not claimed (a = 0)";
    } else {
        for (std::size_t i = 0; i < n && rep.inter_locality.pass; ++i) {
            uint32_t ibit = uint32_t(1) << i;
            for_each_subset_of_size(full & ~ibit, params.Gamma2, [&](uint32_t gamma) {
                if (!rep.inter_locality.pass) return;
                long long mass = 0;
                uint32_t allowed = full & ~gamma & ~ibit;
                for (unsigned extra = 0; extra + 1 <= params.r2 + 1 && extra <= n; ++extra) {
                    for_each_subset_of_size(allowed, extra, [&](uint32_t rest) {
                        uint32_t w = ibit | rest;
                        for (unsigned scount = 0; scount <= params.a && scount <= n; ++scount) {
                            for_each_subset_of_size(full, scount,
                                                    [&](uint32_t s) { mass += dual.count(w, s); });
                        }
                    });
                }
                if (mass < (long long)(q) - 1) {
                    rep.inter_locality.pass = false;
                    rep.inter_locality.witness =
                        "dual mass " + std::to_string(mass) + " < q-1 at node " +
                        std::to_string(i + 1) + ", failed set " + mask_to_string(gamma);
                }
            });
        }
    }
    return rep;
}

}  // namespace rackcode
