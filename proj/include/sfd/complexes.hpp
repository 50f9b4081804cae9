#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfd/interval.hpp"
#include "sfd/numfield.hpp"
#include "sfd/rational.hpp"

namespace sfd {

// Ordered simplex with integer vertices; list position is the total order.
struct OrderedSimplex {
    std::vector<IVec> vertices;

    // construction trace: parent simplex index, chosen vertex, level
    struct Provenance {
        std::size_t parent = 0;
        IVec vertex;
        long ell = 0;
    };
    std::optional<Provenance> provenance;

    int dim() const { return (int)vertices.size() - 1; }
};

struct OrderedComplex {
    int dim = 0;
    std::vector<OrderedSimplex> simplices;
    std::vector<std::int64_t> lattice; // diagonal periods, size == dim
};

// Linear form on the ambient space, evaluated as certified enclosures at any
// precision. Coefficients are either exactly zero or produced on demand so
// precision escalation can re-derive them.
class LinearForm {
  public:
    using CoeffFn = std::function<Interval(int index, long prec)>;

    static LinearForm zero();
    // fixed numeric coefficients (exact doubles), mainly for tests
    static LinearForm from_doubles(std::vector<double> coeffs);
    // custom coefficient provider over the first `active` coordinates
    static LinearForm from_provider(int active, CoeffFn fn);
    // (N_j / 2 pi) * arg(eps_ell at complex place j) on coordinates 0..r-1
    static LinearForm unit_args(std::shared_ptr<const NumberField> field,
                                std::vector<FieldElement> units, long long Nj, int place_j);

    bool identically_zero() const { return zero_; }
    int active_coords() const { return active_; } // coords >= active have zero coefficient
    Interval eval(const IVec& u, long prec) const;

  private:
    bool zero_ = true;
    int active_ = 0;
    CoeffFn coeff_;
};

// Upper fractional part A(u) of omega at u: the unique value with
// 0 < A <= 1 and A - omega(u) integral. k = A - omega(u) is the exact
// integer carried into vertex coordinates.
struct AValue {
    long long k;
    Interval a;
};
AValue upper_fractional(const LinearForm& omega, const IVec& u, const PrecisionLadder& ladder);

// Permutation of vertex ranks realizing the A-order: sort by A ascending,
// ties (certified-exact only) broken by the stored order.
std::vector<int> reorder_A(const OrderedSimplex& s, const LinearForm& omega,
                           const PrecisionLadder& ladder);

// One record per produced simplex of a raise: which parent, which chosen
// vertex, which level, and the exact integer part of its A-value.
struct RaiseRecord {
    std::size_t parent;
    IVec vertex;
    long ell;
    long long k;
};

// The dimension-raising operator: output has dimension p+1 and exactly
// (M2-M1)(p+1)|X| simplices; appended coordinates are exact integers.
OrderedComplex raise(const OrderedComplex& X, const LinearForm& omega, long M1, long M2,
                     const PrecisionLadder& ladder, std::vector<RaiseRecord>* records = nullptr);

// Per-simplex, per-complex-place sector datum: alpha_j = offset + omega_j(v).
struct SectorEntry {
    long long offset;
    IVec v;
};
struct SectorData {
    // [simplex][complex place j]
    std::vector<std::vector<SectorEntry>> entries;
};

struct DomainComplex {
    OrderedComplex X;
    SectorData sectors;
};

// Builds the (n-1)-complex adapted to Z^r x N_1 Z x ... x N_r2 Z from the
// trivial 0-complex: r zero-form raises on [0,1], then one unit-argument
// raise on [0, N_j] per complex place.
DomainComplex build_domain_complex(std::shared_ptr<const NumberField> field,
                                   const std::vector<FieldElement>& units,
                                   const std::vector<long long>& N);

// Omega_j(kappa) = kappa[r+j] + (N_j/2pi) sum_l kappa[l] arg(eps_l^(r1+j)),
// 0-based j; kappa has rational coordinates.
Interval omega_j(const NumberField& field, const std::vector<FieldElement>& units,
                 const std::vector<long long>& N, int j, const QVec& kappa, long prec);

// The linear form used at the complex-place raising stage j (0-based).
LinearForm stage_form(std::shared_ptr<const NumberField> field,
                      const std::vector<FieldElement>& units, const std::vector<long long>& N,
                      int j);

// Exact barycentric coordinates of x with respect to simplex s; empty if x
// is outside.
std::optional<QVec> barycentric(const OrderedSimplex& s, const QVec& x);

// Spanning vertices of x in X (exact rational path).
std::vector<IVec> spanning_vertices(const OrderedComplex& X, const QVec& x);
// Numeric path with tolerance; throws AmbiguousBarycentric when a coordinate
// is within tol of zero, PointOutsideComplex when no simplex contains x.
std::vector<IVec> spanning_vertices(const OrderedComplex& X, const std::vector<double>& x,
                                    double tol);

struct LambdaCheckOptions {
    int samples = 10000;
    std::uint64_t seed = 1;
    // optional field data enabling the Omega_j / sector checks
    std::shared_ptr<const NumberField> field;
    std::vector<FieldElement> units;
    std::vector<long long> N;
    const SectorData* sectors = nullptr;
    PrecisionLadder ladder;
};

struct LambdaReport {
    bool simplicial = true;            // (i)
    bool orders_compatible = true;     // (ii)
    bool orders_lambda_invariant = true; // (iii)
    bool volume_identity = true;       // (iv), exact sum of |det V|
    bool covering = true;              // (iv), sampled surjectivity
    bool interior_disjoint = true;     // (iv), sampled injectivity
    bool spanning_equivariant = true;  // (v)
    bool omega_range = true;           // Omega_j spread <= 1 over each simplex
    bool sector_bounds = true;         // alpha_j <= Omega_j(vertex) <= alpha_j + 1
    mpz_class volume_sum = 0;
    mpz_class volume_expected = 0;
    int samples_used = 0;
    int boundary_pairs_checked = 0;
    std::vector<std::string> failures;

    bool all_pass() const {
        return simplicial && orders_compatible && orders_lambda_invariant && volume_identity &&
               covering && interior_disjoint && spanning_equivariant && omega_range &&
               sector_bounds;
    }
};

LambdaReport lambda_complex_check(const OrderedComplex& X, const LambdaCheckOptions& opt);

// Sum of |det V_alpha| over the complex (exact).
mpz_class total_abs_edge_det(const OrderedComplex& X);

} // namespace sfd
