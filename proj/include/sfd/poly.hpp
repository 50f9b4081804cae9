#pragma once

#include <gmpxx.h>

#include <vector>

namespace sfd {

// Polynomials are coefficient vectors in ascending degree order with a
// nonzero leading coefficient (except the zero polynomial, which is empty).
using QPoly = std::vector<mpq_class>;
using ZPoly = std::vector<mpz_class>;

QPoly qpoly_from_z(const ZPoly& f);
void qpoly_trim(QPoly& f);
int qpoly_deg(const QPoly& f); // -1 for zero polynomial

mpq_class qpoly_eval(const QPoly& f, const mpq_class& x);
QPoly qpoly_derivative(const QPoly& f);
QPoly qpoly_mul(const QPoly& a, const QPoly& b);
QPoly qpoly_rem(QPoly a, const QPoly& b);
// Monic gcd over Q.
QPoly qpoly_gcd(QPoly a, QPoly b);

// Sturm chain of a squarefree polynomial.
struct SturmChain {
    std::vector<QPoly> chain;
    int sign_variations_at(const mpq_class& x) const;
    // Number of roots in (a, b].
    int count_roots(const mpq_class& a, const mpq_class& b) const;
};
SturmChain sturm_chain(const QPoly& f);

// 1 + max |a_i| for monic integer f: all roots lie in |z| < bound.
mpz_class cauchy_root_bound(const ZPoly& f);

} // namespace sfd
