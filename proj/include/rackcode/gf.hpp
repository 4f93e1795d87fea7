#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

#include "rackcode/errors.hpp"

namespace rackcode {

/// Prime field GF(q) with 2 <= q < 2^16. Elements are canonical residues
/// in [0, q); all arithmetic is exact integer arithmetic mod q.
class Gf {
public:
    explicit Gf(unsigned q);  // throws NonPrimeModulus unless q is prime

    unsigned q() const { return q_; }

    uint16_t add(uint16_t a, uint16_t b) const {
        uint32_t s = uint32_t(a) + b;
        return uint16_t(s >= q_ ? s - q_ : s);
    }
    uint16_t sub(uint16_t a, uint16_t b) const {
        return uint16_t(a >= b ? a - b : a + q_ - b);
    }
    uint16_t neg(uint16_t a) const { return uint16_t(a == 0 ? 0 : q_ - a); }
    uint16_t mul(uint16_t a, uint16_t b) const {
        return uint16_t(uint32_t(a) * b % q_);
    }
    uint16_t inv(uint16_t a) const;  // throws Error on a == 0

    /// Canonical residue of an arbitrary integer (negatives wrap into [0, q)).
    uint16_t reduce(long long v) const {
        long long r = v % static_cast<long long>(q_);
        if (r < 0) r += q_;
        return uint16_t(r);
    }

    bool operator==(const Gf& other) const { return q_ == other.q_; }
    bool operator!=(const Gf& other) const { return q_ != other.q_; }

private:
    unsigned q_;
};

using Vec = std::vector<uint16_t>;

/// Dense row-major matrix over one prime field.
class Matrix {
public:
    /// Empty 0x0 placeholder over GF(2); useful for late-initialized fields.
    Matrix() : field_(Gf(2)), rows_(0), cols_(0) {}

    Matrix(Gf field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(Gf field, std::size_t n);
    /// Builds from integer rows (entries reduced mod q). `cols` disambiguates
    /// the empty-matrix case; throws DimensionMismatch on ragged input.
    static Matrix from_rows(Gf field, const std::vector<std::vector<long long>>& rows,
                            std::size_t cols);

    const Gf& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    uint16_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    uint16_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

    Vec row(std::size_t r) const;
    void set_row(std::size_t r, const Vec& v);

    /// Rows of `below` appended under this matrix (column counts must match).
    Matrix vstack(const Matrix& below) const;

    bool operator==(const Matrix& other) const {
        return field_ == other.field_ && rows_ == other.rows_ &&
               cols_ == other.cols_ && a_ == other.a_;
    }

private:
    Gf field_;
    std::size_t rows_, cols_;
    std::vector<uint16_t> a_;
};

// ---- vector helpers -------------------------------------------------------

Vec add_vec(const Gf& f, const Vec& a, const Vec& b);
Vec scale_vec(const Gf& f, uint16_t c, const Vec& v);
uint16_t dot(const Gf& f, const Vec& a, const Vec& b);
/// Row vector times matrix: v (1 x rows) * m (rows x cols).
Vec vec_mat(const Gf& f, const Vec& v, const Matrix& m);
/// Matrix times column vector: m (rows x cols) * v (cols).
Vec mat_vec(const Gf& f, const Matrix& m, const Vec& v);
bool is_zero(const Vec& v);
std::vector<std::size_t> support(const Vec& v);

// ---- elimination ----------------------------------------------------------

struct RrefResult {
    Matrix reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row-echelon form; preserves the row space.
RrefResult rref(const Matrix& m);

std::size_t rank(const Matrix& m);

/// Rows form a basis of the right kernel {v : m v^T = 0};
/// rank(m) + returned row count == m.cols().
Matrix kernel_basis(const Matrix& m);

// ---- row-space enumeration ------------------------------------------------

constexpr uint64_t kDefaultSpanCap = uint64_t{1} << 24;

/// All q^rank distinct vectors spanned by the rows of a matrix, zero vector
/// included, each yielded exactly once in a fixed canonical order: coefficient
/// odometer in base q over the reduced basis, basis row 0 cycling fastest.
class RowSpace {
public:
    RowSpace(const Matrix& m, uint64_t cap);

    uint64_t size() const { return size_; }
    std::size_t dimension() const { return basis_.size(); }
    std::size_t width() const { return cols_; }

    class iterator {
    public:
        using value_type = Vec;
        using reference = const Vec&;
        using pointer = const Vec*;
        using difference_type = std::ptrdiff_t;
        using iterator_category = std::input_iterator_tag;

        iterator(const RowSpace* rs, uint64_t index);
        const Vec& operator*() const { return current_; }
        const Vec* operator->() const { return &current_; }
        iterator& operator++();
        bool operator==(const iterator& other) const { return index_ == other.index_; }
        bool operator!=(const iterator& other) const { return index_ != other.index_; }

    private:
        const RowSpace* rs_;
        uint64_t index_;
        std::vector<uint16_t> digits_;
        Vec current_;
    };

    iterator begin() const { return iterator(this, 0); }
    iterator end() const { return iterator(this, size_); }

    /// Vector at a given odometer index (index's base-q digits weight the basis rows).
    Vec at(uint64_t index) const;

private:
    friend class iterator;
    Gf field_;
    std::size_t cols_;
    std::vector<Vec> basis_;
    uint64_t size_;
};

/// Throws SpanTooLarge when q^rank exceeds `cap`.
RowSpace row_space(const Matrix& m, uint64_t cap = kDefaultSpanCap);

// ---- linear solve ---------------------------------------------------------

/// Solution set of a x^T = b: one particular solution plus a kernel basis.
/// The full set is {particular + sum c_i * nullspace_row_i}; its size is
/// q^(nullspace rows).
struct SolveResult {
    Vec particular;
    Matrix nullspace;
};

/// Throws Inconsistent when b is outside the column space of a.
SolveResult solve(const Matrix& a, const Vec& b);

}  // namespace rackcode
