#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sfd {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<std::vector<mpq_class>>;
using IVec = std::vector<std::int64_t>;

// Parses "p/q" or "p" (q > 0 after canonicalization). Throws SchemaError on
// malformed input.
mpq_class parse_rational(const std::string& s);
std::string rational_str(const mpq_class& q);

// Exact determinant via fraction-free-ish Gaussian elimination.
mpq_class qmat_det(QMat m);
// Exact solve of M x = b; throws SingularCone-agnostic std::domain_error on
// singular input (callers decide what singularity means for them).
QVec qmat_solve(QMat m, QVec b);
bool qmat_is_singular(QMat m);
QMat qmat_inverse(QMat m);

// Integer determinant of the (n-1)x(n-1) matrix with columns v_i - v_0 taken
// in the given vertex order.
mpz_class simplex_edge_det(const std::vector<IVec>& vertices);

// Best rational approximation to x (given as exact rational) with
// denominator <= max_den, via the Stern-Brocot / continued fraction walk.
mpq_class round_to_denominator(const mpq_class& x, const mpz_class& max_den);

} // namespace sfd
