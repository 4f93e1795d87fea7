#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rackcode/gf.hpp"

namespace rackcode {

using Rational = mpq_class;

constexpr uint64_t kDefaultCodebookCap = uint64_t{1} << 24;

/// A multi-rack storage code: M racks of N nodes each. H (S1 x N) is the
/// intra-rack parity, K (S2 x N) the inter-rack parity, G (L x M) the
/// helper-rack parity. Stored symbols form an M x N matrix X subject to
/// H X^T = 0 (per rack) and K X^T G^T = 0.
struct CodeSpec {
    Gf field;
    std::size_t racks;  // M
    std::size_t nodes;  // N
    Matrix h, k, g;

    CodeSpec(Gf f, std::size_t m, std::size_t n, Matrix h_, Matrix k_, Matrix g_)
        : field(f), racks(m), nodes(n), h(std::move(h_)), k(std::move(k_)), g(std::move(g_)) {}

    std::size_t s1() const { return h.rows(); }
    std::size_t s2() const { return k.rows(); }
    std::size_t l() const { return g.rows(); }
};

/// The canonical helper parity for two racks: [1, -1].
Matrix canonical_two_rack_g(Gf f);

struct ValidationReport {
    bool valid = true;                  // no dimension errors
    std::vector<std::string> errors;    // structural problems
    std::vector<std::string> warnings;  // rank deficiencies, degenerate sizes
    std::size_t rank_h = 0, rank_k = 0, rank_g = 0, rank_stacked = 0;
};

ValidationReport validate_spec(const CodeSpec& spec);

/// All parity constraints as one (M*S1 + L*S2) x (M*N) system; the code is
/// its right kernel, with X flattened row-major (x_{m,n} at column m*N + n).
Matrix stacked_parity(const CodeSpec& spec);

Vec flatten_codeword(const Matrix& x);
Matrix unflatten_codeword(const CodeSpec& spec, const Vec& v);

bool is_codeword(const CodeSpec& spec, const Matrix& x);

/// Materializes the full codebook; throws CodebookTooLarge past the cap.
std::vector<Matrix> enumerate_codebook(const CodeSpec& spec,
                                       uint64_t cap = kDefaultCodebookCap);

/// Number of codewords as an exact integer (q^(M*N - rank of stacked system)).
mpz_class codebook_size(const CodeSpec& spec);

struct RateReport {
    Rational lower_bound;  // (MN - M*S1 - L*S2) / MN
    Rational exact;        // (MN - rank of the stacked system) / MN
};

RateReport code_rate(const CodeSpec& spec);

/// Two racks, G = [1, -1]: pairs (x, y) with H x = H y = 0 and K x = K y.
struct TwoRackCode {
    Gf field;
    std::size_t nodes;
    Matrix h, k;
    std::vector<std::pair<Vec, Vec>> codebook;
};

TwoRackCode two_rack_code(const Matrix& h, const Matrix& k,
                          uint64_t cap = kDefaultCodebookCap);

/// Uniform codeword sampling; the stacked-system kernel is computed once.
class CodewordSampler {
public:
    explicit CodewordSampler(const CodeSpec& spec);
    Matrix sample(std::mt19937_64& rng) const;

private:
    Gf field_;
    std::size_t racks_, nodes_;
    Matrix kernel_;
};

/// Deterministic for a fixed seed; uniform over the codebook.
Matrix random_codeword(const CodeSpec& spec, uint64_t seed);

/// Uniform draw from [0, bound) by rejection; portable across platforms.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

}  // namespace rackcode
