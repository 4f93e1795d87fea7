#include "rackcode/gf.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace rackcode {

namespace {

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

}  // namespace

Gf::Gf(unsigned q) : q_(q) {
    if (q < 2 || q >= (1u << 16) || !is_prime(q)) {
        throw NonPrimeModulus("field modulus must be a prime in [2, 2^16): got " +
                              std::to_string(q));
    }
}

uint16_t Gf::inv(uint16_t a) const {
    if (a == 0) throw Error("division by zero in GF(" + std::to_string(q_) + ")");
    // extended Euclid on (a, q)
    long long t = 0, new_t = 1;
    long long r = q_, new_r = a;
    while (new_r != 0) {
        long long quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    if (t < 0) t += q_;
    return uint16_t(t);
}

Matrix Matrix::identity(Gf field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(Gf field, const std::vector<std::vector<long long>>& rows,
                         std::size_t cols) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw DimensionMismatch("row " + std::to_string(r) + " has " +
                                    std::to_string(rows[r].size()) + " entries, expected " +
                                    std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = field.reduce(rows[r][c]);
    }
    return m;
}

Vec Matrix::row(std::size_t r) const {
    Vec v(cols_);
    for (std::size_t c = 0; c < cols_; ++c) v[c] = at(r, c);
    return v;
}

void Matrix::set_row(std::size_t r, const Vec& v) {
    if (v.size() != cols_) throw DimensionMismatch("set_row width mismatch");
    for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
}

Matrix Matrix::vstack(const Matrix& below) const {
    if (below.rows() > 0 && below.cols() != cols_) {
        throw DimensionMismatch("vstack column mismatch");
    }
    Matrix out(field_, rows_ + below.rows(), cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
    for (std::size_t r = 0; r < below.rows(); ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(rows_ + r, c) = below.at(r, c);
    return out;
}

Vec add_vec(const Gf& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector length mismatch in add");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
    return out;
}

Vec scale_vec(const Gf& f, uint16_t c, const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.mul(c, v[i]);
    return out;
}

uint16_t dot(const Gf& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector length mismatch in dot");
    uint32_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc = (acc + uint32_t(a[i]) * b[i]) % f.q();
    }
    return uint16_t(acc);
}

Vec vec_mat(const Gf& f, const Vec& v, const Matrix& m) {
    if (v.size() != m.rows()) throw DimensionMismatch("vec_mat size mismatch");
    Vec out(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (v[r] == 0) continue;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[c] = f.add(out[c], f.mul(v[r], m.at(r, c)));
        }
    }
    return out;
}

Vec mat_vec(const Gf& f, const Matrix& m, const Vec& v) {
    if (v.size() != m.cols()) throw DimensionMismatch("mat_vec size mismatch");
    Vec out(m.rows(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        uint32_t acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc = (acc + uint32_t(m.at(r, c)) * v[c]) % f.q();
        }
        out[r] = uint16_t(acc);
    }
    return out;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](uint16_t x) { return x == 0; });
}

std::vector<std::size_t> support(const Vec& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) out.push_back(i);
    return out;
}

RrefResult rref(const Matrix& m) {
    const Gf& f = m.field();
    Matrix a = m;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t sel = row;
        while (sel < a.rows() && a.at(sel, col) == 0) ++sel;
        if (sel == a.rows()) continue;
        if (sel != row) {
            for (std::size_t c = 0; c < a.cols(); ++c)
                std::swap(a.at(sel, c), a.at(row, c));
        }
        uint16_t piv_inv = f.inv(a.at(row, col));
        for (std::size_t c = col; c < a.cols(); ++c)
            a.at(row, c) = f.mul(a.at(row, c), piv_inv);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == row || a.at(r, col) == 0) continue;
            uint16_t factor = a.at(r, col);
            for (std::size_t c = col; c < a.cols(); ++c)
                a.at(r, c) = f.sub(a.at(r, c), f.mul(factor, a.at(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return RrefResult{std::move(a), pivots.size(), std::move(pivots)};
}

std::size_t rank(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    return rref(m).rank;
}

Matrix kernel_basis(const Matrix& m) {
    const Gf& f = m.field();
    if (m.rows() == 0) return Matrix::identity(f, m.cols());
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivot_cols) is_pivot[p] = true;

    Matrix basis(f, m.cols() - r.rank, m.cols());
    std::size_t out_row = 0;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        basis.at(out_row, free_col) = 1;
        for (std::size_t i = 0; i < r.rank; ++i) {
            basis.at(out_row, r.pivot_cols[i]) = f.neg(r.reduced.at(i, free_col));
        }
        ++out_row;
    }
    return basis;
}

RowSpace::RowSpace(const Matrix& m, uint64_t cap) : field_(m.field()), cols_(m.cols()) {
    if (m.rows() > 0) {
        RrefResult r = rref(m);
        basis_.reserve(r.rank);
        for (std::size_t i = 0; i < r.rank; ++i) basis_.push_back(r.reduced.row(i));
    }
    // q^dim with overflow/cap guard
    uint64_t size = 1;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (size > cap / field_.q()) {
            throw SpanTooLarge("row space has q^" + std::to_string(basis_.size()) +
                               " vectors, cap is " + std::to_string(cap));
        }
        size *= field_.q();
    }
    if (size > cap) {
        throw SpanTooLarge("row space exceeds cap " + std::to_string(cap));
    }
    size_ = size;
}

RowSpace::iterator::iterator(const RowSpace* rs, uint64_t index)
    : rs_(rs), index_(index), digits_(rs->basis_.size(), 0), current_(rs->cols_, 0) {
    if (index_ != 0 && index_ != rs_->size_) {
        current_ = rs_->at(index_);
        uint64_t rem = index_;
        for (std::size_t i = 0; i < digits_.size(); ++i) {
            digits_[i] = uint16_t(rem % rs_->field_.q());
            rem /= rs_->field_.q();
        }
    }
}

RowSpace::iterator& RowSpace::iterator::operator++() {
    ++index_;
    if (index_ >= rs_->size_) return *this;
    // base-q odometer: each carry step adds one basis row, so digit rollover
    // (adding the row q-1 more times would cancel) is a single further add
    const Gf& f = rs_->field_;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        current_ = add_vec(f, current_, rs_->basis_[i]);
        if (digits_[i] + 1u < f.q()) {
            ++digits_[i];
            break;
        }
        digits_[i] = 0;
        // rolling over: current already gained q * basis_[i] total == no net change
    }
    return *this;
}

Vec RowSpace::at(uint64_t index) const {
    Vec v(cols_, 0);
    uint64_t rem = index;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        uint16_t digit = uint16_t(rem % field_.q());
        rem /= field_.q();
        if (digit != 0) v = add_vec(field_, v, scale_vec(field_, digit, basis_[i]));
    }
    return v;
}

RowSpace row_space(const Matrix& m, uint64_t cap) { return RowSpace(m, cap); }

SolveResult solve(const Matrix& a, const Vec& b) {
    if (a.rows() != b.size()) throw DimensionMismatch("solve: rhs length mismatch");
    const Gf& f = a.field();
    Matrix aug(f, a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    RrefResult rr = rref(aug);
    for (std::size_t p : rr.pivot_cols) {
        if (p == a.cols()) throw Inconsistent("solve: rhs outside column space");
    }
    Vec particular(a.cols(), 0);
    for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i) {
        particular[rr.pivot_cols[i]] = rr.reduced.at(i, a.cols());
    }
    return SolveResult{std::move(particular), kernel_basis(a)};
}

}  // namespace rackcode
