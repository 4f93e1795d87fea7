#pragma once

// Shared reference codes used across the test suites.

#include "rackcode/code_model.hpp"
#include "rackcode/gf.hpp"

namespace fixtures {

using rackcode::CodeSpec;
using rackcode::Gf;
using rackcode::Matrix;

inline rackcode::Rational frac(long num, long den) {
    rackcode::Rational r(num, den);
    r.canonicalize();
    return r;
}

// 4x8 binary intra-rack parity with weight-4 rows; every node has several
// three-node repair groups.
inline Matrix intra8() {
    return Matrix::from_rows(Gf(2),
                             {{1, 1, 1, 0, 1, 0, 0, 0},
                              {1, 1, 0, 1, 0, 1, 0, 0},
                              {0, 1, 1, 1, 0, 0, 1, 0},
                              {1, 0, 1, 1, 0, 0, 0, 1}},
                             8);
}

// 2x8 binary inter-rack parity paired with intra8().
inline Matrix inter8() {
    return Matrix::from_rows(Gf(2), {{1, 1, 0, 1, 1, 0, 0, 1}, {0, 1, 1, 0, 1, 0, 1, 1}}, 8);
}

// 3x5 helper-rack parity for the five-rack sample network.
inline Matrix helper5() {
    return Matrix::from_rows(Gf(2), {{1, 1, 1, 1, 0}, {0, 1, 1, 1, 1}, {1, 1, 0, 1, 1}}, 5);
}

// Five racks of eight nodes over GF(2); the main worked sample network.
inline CodeSpec five_rack_spec() {
    return CodeSpec(Gf(2), 5, 8, intra8(), inter8(), helper5());
}

// GF(3) 2x4 intra parity; the small ternary repair example.
inline Matrix intra4_gf3() {
    return Matrix::from_rows(Gf(3), {{0, 1, 1, 1}, {1, 0, 1, 2}}, 4);
}

// Single-rack wrapper around intra4_gf3() (no inter-rack structure).
inline CodeSpec single_rack_gf3_spec() {
    Gf f(3);
    return CodeSpec(f, 1, 4, intra4_gf3(), Matrix(f, 0, 4), Matrix(f, 0, 1));
}

}  // namespace fixtures
