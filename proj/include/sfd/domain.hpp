#pragma once

#include <memory>
#include <vector>

#include "sfd/complexes.hpp"
#include "sfd/twisters.hpp"

namespace sfd {

// One cone of the signed fundamental domain: n field-element generators in
// the stored vertex order, the sign mu, the e1-coordinate signs, and the
// derived half-open face selection.
struct SignedCone {
    std::size_t alpha = 0;
    OrderedSimplex simplex;
    std::vector<FieldElement> generators;
    int mu = 0;
    std::vector<int> y_signs;     // empty when mu == 0
    std::vector<bool> closure;    // face t_l = 0 included iff y_l > 0
    std::vector<SectorEntry> sector;
};

struct SignedDomain {
    std::shared_ptr<const NumberField> field;
    std::vector<FieldElement> units;
    std::vector<long long> N;
    Twister twister;
    std::vector<SignedCone> cones;
    int det_R_sign = 0;
    int basis_embedding_sign = 0;
    int degree_constant = 0; // (-1)^(n-1) (-1)^(r2(r2-1)/2) sign(det R)
    long precision_bits = 128;

    // verification defaults carried from the spec file
    std::uint64_t default_seed = 42;
    int default_samples = 1000;
    double default_tolerance = 1e-30;

    OrderedComplex complex_view() const;
    SectorData sector_view() const;
    std::size_t nonzero_cone_count() const;
};

// w_l = beta(v_l) * prod_j eps_j^(v_l[j]) over the first r coordinates.
std::vector<FieldElement> cone_generators(const NumberField& field, const OrderedSimplex& s,
                                          const Twister& tw,
                                          const std::vector<FieldElement>& units);

// Certified sign of det R (first row ones, then unit log rows).
int regulator_sign(const NumberField& field, const std::vector<FieldElement>& units,
                   const PrecisionLadder& ladder);

// Exact determinant of the n x n rational coordinate matrix of generators.
mpq_class generator_coord_det(const std::vector<FieldElement>& generators);

// Certified sign of the numeric matrix W (rows iota(w_l)); pre: det != 0.
int numeric_W_sign(const NumberField& field, const std::vector<FieldElement>& generators,
                   const PrecisionLadder& ladder);

// mu = (-1)^(r2(r2-1)/2) sign(det R * det V * det W); 0 iff the generators
// are Q-linearly dependent (exact test).
int sign_mu(const NumberField& field, const std::vector<FieldElement>& units,
            const OrderedSimplex& simplex, const std::vector<FieldElement>& generators,
            const PrecisionLadder& ladder);

struct E1Solution {
    std::vector<int> signs;
    std::vector<double> y;      // midpoints, for reporting
};

// Solves e1 = sum y_l w_l in iota coordinates and certifies every y_l != 0.
// Pre: generators R-independent (mu != 0) and r1 >= 1.
E1Solution solve_e1(const NumberField& field, const std::vector<FieldElement>& generators,
                    const PrecisionLadder& ladder);

enum class Membership { Yes, No, Ambiguous };

// Numeric membership tests against all cones of a domain, with the interval
// LU of each cone's generator matrix factored once.
class MembershipEngine {
  public:
    MembershipEngine(const SignedDomain& dom, long prec);

    long prec() const { return prec_; }
    // x in iota coordinates; tol is relative to the coordinate vector scale.
    Membership contains(std::size_t cone_idx, const IVecI& x, double tol) const;

  private:
    struct LU {
        IMat lower, upper;
        std::vector<std::size_t> perm;
        bool singular = true;
    };
    const SignedDomain& dom_;
    long prec_;
    std::vector<LU> lus_;
    std::vector<const SignedCone*> cones_;
};

// Exact membership for k-rational points: x in C_alpha with the half-open
// faces decided by the stored y-signs. Throws SingularCone if mu == 0.
bool contains_exact(const NumberField& field, const SignedCone& cone, const FieldElement& x);

// Certified: every generator's embedding at complex place j lies in the open
// half-plane H((alpha_j + 1/2)/N_j). Vacuously true when r2 == 0. Returns
// false only on a certified violation; undecided raises PrecisionExhausted.
bool sector_check(const NumberField& field, const std::vector<FieldElement>& units,
                  const std::vector<long long>& N, const SignedCone& cone,
                  const PrecisionLadder& ladder);

// End-to-end assembly of the signed fundamental domain.
SignedDomain build_signed_domain(std::shared_ptr<const NumberField> field,
                                 std::vector<FieldElement> units, std::vector<long long> N,
                                 Twister twister);

} // namespace sfd
