#pragma once

#include <gmpxx.h>

#include <vector>

#include "sfd/interval.hpp"
#include "sfd/poly.hpp"

namespace sfd {

// A real root pinned by an exact rational bracket: either lo == hi (exact
// rational root) or f(lo) and f(hi) have strictly opposite signs.
struct RealRootEnc {
    mpq_class lo, hi;
    Interval to_interval(long prec) const { return Interval::from_endpoints(lo, hi, prec); }
};

// A certifiably non-real root of the upper half plane.
struct ComplexRootEnc {
    Interval re, im; // im.lo > 0
};

struct RootSet {
    long prec = 0; // quality: enclosure widths <= ~2^-(prec+16)
    std::vector<RealRootEnc> real_roots;       // strictly ascending
    std::vector<ComplexRootEnc> complex_roots; // Im > 0, ascending real part (ties by Im)
};

// Exact count of distinct real roots (Sturm).
int count_real_roots(const ZPoly& monic_f);

// Isolates and refines all roots of a squarefree monic integer polynomial.
// Real roots come with exact sign-change brackets; complex pairs come as
// certified boxes (Weierstrass disk certification over the full root list).
// Throws PrecisionExhausted if certification cannot be completed below the
// ladder cap.
RootSet find_roots(const ZPoly& monic_f, long prec, const PrecisionLadder& ladder);

} // namespace sfd
