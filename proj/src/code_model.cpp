#include "rackcode/code_model.hpp"

#include <string>

namespace rackcode {

Matrix canonical_two_rack_g(Gf f) {
    return Matrix::from_rows(f, {{1, -1}}, 2);
}

ValidationReport validate_spec(const CodeSpec& spec) {
    ValidationReport rep;
    auto error = [&rep](const std::string& msg) {
        rep.errors.push_back(msg);
        rep.valid = false;
    };

    if (spec.racks == 0) error("rack count M must be positive");
    if (spec.nodes == 0) error("node count N must be positive");
    if (spec.h.field() != spec.field || spec.k.field() != spec.field ||
        spec.g.field() != spec.field) {
        error("all matrices must share the spec field GF(" + std::to_string(spec.field.q()) + ")");
    }
    if (spec.h.rows() > 0 && spec.h.cols() != spec.nodes)
        error("H has " + std::to_string(spec.h.cols()) + " columns, expected N = " +
              std::to_string(spec.nodes));
    if (spec.k.rows() > 0 && spec.k.cols() != spec.nodes)
        error("K has " + std::to_string(spec.k.cols()) + " columns, expected N = " +
              std::to_string(spec.nodes));
    if (spec.g.rows() > 0 && spec.g.cols() != spec.racks)
        error("G has " + std::to_string(spec.g.cols()) + " columns, expected M = " +
              std::to_string(spec.racks));
    if (!rep.valid) return rep;

    rep.rank_h = rank(spec.h);
    rep.rank_k = rank(spec.k);
    rep.rank_g = rank(spec.g);
    rep.rank_stacked = rank(stacked_parity(spec));

    if (rep.rank_h < spec.s1()) rep.warnings.push_back("H rows dependent");
    if (rep.rank_k < spec.s2()) rep.warnings.push_back("K rows dependent");
    if (rep.rank_g < spec.l()) rep.warnings.push_back("G rows dependent");
    if (rep.rank_h == spec.s1() && rep.rank_k == spec.s2() &&
        rank(spec.h.vstack(spec.k)) < spec.s1() + spec.s2()) {
        rep.warnings.push_back("H and K rows jointly dependent");
    }
    if (spec.s1() + spec.s2() > spec.nodes)
        rep.warnings.push_back("degenerate: S1 + S2 exceeds N");
    if (spec.l() > spec.racks) rep.warnings.push_back("degenerate: L exceeds M");
    return rep;
}

Matrix stacked_parity(const CodeSpec& spec) {
    const Gf& f = spec.field;
    const std::size_t m = spec.racks, n = spec.nodes;
    Matrix out(f, m * spec.s1() + spec.l() * spec.s2(), m * n);
    std::size_t row = 0;
    // per-rack intra parity: H applied to each rack's row of X
    for (std::size_t rack = 0; rack < m; ++rack) {
        for (std::size_t i = 0; i < spec.s1(); ++i, ++row) {
            for (std::size_t c = 0; c < n; ++c) out.at(row, rack * n + c) = spec.h.at(i, c);
        }
    }
    // inter parity: entry (l, i) of K X^T G^T is sum_m G[l][m] * K[i] . X_{m,*}
    for (std::size_t l = 0; l < spec.l(); ++l) {
        for (std::size_t i = 0; i < spec.s2(); ++i, ++row) {
            for (std::size_t rack = 0; rack < m; ++rack) {
                uint16_t gcoef = spec.g.at(l, rack);
                if (gcoef == 0) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    out.at(row, rack * n + c) = f.mul(gcoef, spec.k.at(i, c));
                }
            }
        }
    }
    return out;
}

Vec flatten_codeword(const Matrix& x) {
    Vec v(x.rows() * x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) v[r * x.cols() + c] = x.at(r, c);
    return v;
}

Matrix unflatten_codeword(const CodeSpec& spec, const Vec& v) {
    if (v.size() != spec.racks * spec.nodes)
        throw DimensionMismatch("flattened codeword length mismatch");
    Matrix x(spec.field, spec.racks, spec.nodes);
    for (std::size_t r = 0; r < spec.racks; ++r)
        for (std::size_t c = 0; c < spec.nodes; ++c) x.at(r, c) = v[r * spec.nodes + c];
    return x;
}

bool is_codeword(const CodeSpec& spec, const Matrix& x) {
    if (x.rows() != spec.racks || x.cols() != spec.nodes)
        throw DimensionMismatch("stored-symbol matrix must be M x N");
    if (x.field() != spec.field) throw DimensionMismatch("field mismatch");
    const Gf& f = spec.field;
    for (std::size_t rack = 0; rack < spec.racks; ++rack) {
        if (!is_zero(mat_vec(f, spec.h, x.row(rack)))) return false;
    }
    // K X^T G^T == 0
    for (std::size_t l = 0; l < spec.l(); ++l) {
        for (std::size_t i = 0; i < spec.s2(); ++i) {
            uint32_t acc = 0;
            for (std::size_t rack = 0; rack < spec.racks; ++rack) {
                uint16_t gcoef = spec.g.at(l, rack);
                if (gcoef == 0) continue;
                acc = (acc + uint32_t(gcoef) * dot(f, spec.k.row(i), x.row(rack))) % f.q();
            }
            if (acc != 0) return false;
        }
    }
    return true;
}

std::vector<Matrix> enumerate_codebook(const CodeSpec& spec, uint64_t cap) {
    Matrix ker = kernel_basis(stacked_parity(spec));
    RowSpace space = [&]() -> RowSpace {
        try {
            return row_space(ker, cap);
        } catch (const SpanTooLarge& e) {
            throw CodebookTooLarge(e.what());
        }
    }();
    std::vector<Matrix> out;
    out.reserve(space.size());
    for (const Vec& v : space) out.push_back(unflatten_codeword(spec, v));
    return out;
}

mpz_class codebook_size(const CodeSpec& spec) {
    std::size_t dim = spec.racks * spec.nodes - rank(stacked_parity(spec));
    mpz_class size;
    mpz_ui_pow_ui(size.get_mpz_t(), spec.field.q(), dim);
    return size;
}

RateReport code_rate(const CodeSpec& spec) {
    long mn = long(spec.racks * spec.nodes);
    long constraints = long(spec.racks * spec.s1() + spec.l() * spec.s2());
    RateReport rep;
    rep.lower_bound = Rational(mn - constraints, mn);
    rep.lower_bound.canonicalize();
    rep.exact = Rational(mn - long(rank(stacked_parity(spec))), mn);
    rep.exact.canonicalize();
    return rep;
}

TwoRackCode two_rack_code(const Matrix& h, const Matrix& k, uint64_t cap) {
    if (h.rows() > 0 && k.rows() > 0 && h.cols() != k.cols())
        throw DimensionMismatch("H and K must have the same number of columns");
    const Gf f = h.field();
    std::size_t n = h.rows() > 0 ? h.cols() : k.cols();
    CodeSpec spec(f, 2, n, h, k, canonical_two_rack_g(f));
    TwoRackCode code{f, n, h, k, {}};
    for (const Matrix& x : enumerate_codebook(spec, cap)) {
        code.codebook.emplace_back(x.row(0), x.row(1));
    }
    return code;
}

CodewordSampler::CodewordSampler(const CodeSpec& spec)
    : field_(spec.field),
      racks_(spec.racks),
      nodes_(spec.nodes),
      kernel_(kernel_basis(stacked_parity(spec))) {}

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    // rejection sampling keeps the draw exactly uniform and portable
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

Matrix CodewordSampler::sample(std::mt19937_64& rng) const {
    Vec flat(racks_ * nodes_, 0);
    for (std::size_t i = 0; i < kernel_.rows(); ++i) {
        uint16_t coef = uint16_t(uniform_below(rng, field_.q()));
        if (coef == 0) continue;
        for (std::size_t c = 0; c < flat.size(); ++c) {
            flat[c] = field_.add(flat[c], field_.mul(coef, kernel_.at(i, c)));
        }
    }
    Matrix x(field_, racks_, nodes_);
    for (std::size_t r = 0; r < racks_; ++r)
        for (std::size_t c = 0; c < nodes_; ++c) x.at(r, c) = flat[r * nodes_ + c];
    return x;
}

Matrix random_codeword(const CodeSpec& spec, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return CodewordSampler(spec).sample(rng);
}

}  // namespace rackcode
