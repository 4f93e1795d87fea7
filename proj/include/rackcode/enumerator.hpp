#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rackcode/code_model.hpp"

namespace rackcode {

// Support analysis of two-rack codes. A codeword pair (x, y) of length N per
// side has support (w, s): bit i of w set iff x[i] != 0, bit i of s set iff
// y[i] != 0. Node i maps to bit i (0-based).

/// Transform kernel: 1 when v = 0, q-1 when u = 0 and v = 1, -1 otherwise.
int kappa(unsigned q, int u, int v);

/// Counts per support pair. Dense array for n <= 12, sparse map above.
class EnumeratorTable {
public:
    EnumeratorTable(std::size_t n, unsigned q);

    std::size_t n() const { return n_; }
    unsigned q() const { return q_; }
    long long total() const { return total_; }

    long long count(uint32_t w, uint32_t s) const;
    void add(uint32_t w, uint32_t s, long long delta);

    /// All nonzero cells as ((w, s), count), ordered by (w, s).
    std::vector<std::pair<std::pair<uint32_t, uint32_t>, long long>> entries() const;

    bool dense() const { return !dense_.empty() || n_ <= kDenseLimit; }
    static constexpr std::size_t kDenseLimit = 12;

    bool operator==(const EnumeratorTable& other) const;

private:
    std::size_t n_;
    unsigned q_;
    long long total_ = 0;
    std::vector<long long> dense_;                 // 4^n cells when n <= kDenseLimit
    std::map<uint64_t, long long> sparse_;         // otherwise
    uint64_t key(uint32_t w, uint32_t s) const { return (uint64_t(w) << n_) | s; }
};

/// Tallies the codebook by support pair; the total equals the codebook size.
EnumeratorTable support_enumerator(const TwoRackCode& code);

/// Dual-code enumerator via the kappa transform, exactly:
/// dual(w,s) = (1/|C|) sum_{w',s'} table(w',s') prod_j kappa(w'_j,w_j) kappa(s'_j,s_j).
/// Throws NonIntegerDual when the input is not a valid code enumerator.
EnumeratorTable macwilliams_dual(const EnumeratorTable& table);

/// Independent oracle: enumerates the dual code itself (rows (h,0), (0,h),
/// (k,-k) spanning it) and tallies supports.
EnumeratorTable dual_bruteforce(const Matrix& h, const Matrix& k,
                                uint64_t cap = kDefaultSpanCap);

/// Resilience/locality class parameters of a two-rack code.
struct CodeClassParams {
    unsigned beta1 = 0;   // intra-rack resilience: any beta1 failures repairable in-rack
    unsigned Gamma1 = 0;  // intra locality context: Gamma1 + 1 concurrent failures
    unsigned r1 = 0;      // intra locality: at most r1 helpers in-rack (0 = not claimed)
    unsigned beta2 = 0;   // inter-rack resilience
    unsigned Gamma2 = 0;  // inter locality context
    unsigned r2 = 0;      // inter locality: surviving in-rack helpers
    unsigned a = 0;       // inter locality: helper symbols per helper rack (0 = not claimed)
};

struct PropertyResult {
    bool pass = true;
    bool checked = true;   // false when the claim is absent (r1 = 0 / a = 0)
    std::string witness;   // first violation, 1-based indices; empty when pass
};

struct CertReport {
    PropertyResult symmetry;          // counts(w,s) == counts(s,w)
    PropertyResult intra_resilience;  // counts(w,s) == 0 for 1 <= |w| <= beta1
    PropertyResult intra_locality;    // dual mass >= q-1 on every intra helper menu
    PropertyResult inter_resilience;  // counts(w,0) == 0 for 1 <= |w| <= beta2
    PropertyResult inter_locality;    // dual mass >= q-1 on every helper-rack menu
    std::string quantifier_note;

    bool all_pass() const {
        return symmetry.pass && intra_resilience.pass && intra_locality.pass &&
               inter_resilience.pass && inter_locality.pass;
    }
};

/// Checks each class property exactly against the code's enumerator and its
/// dual. Locality claims with r1 = 0 (intra) or a = 0 (inter) are treated as
/// absent and reported unchecked.
CertReport certify(const TwoRackCode& code, const CodeClassParams& params);

}  // namespace rackcode
