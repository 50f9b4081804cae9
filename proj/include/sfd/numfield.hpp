#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "sfd/interval.hpp"
#include "sfd/poly.hpp"
#include "sfd/rational.hpp"
#include "sfd/roots.hpp"

namespace sfd {

// Element of k = Q[x]/(f) as exact rational coordinates in the power basis
// 1, theta, ..., theta^(n-1).
struct FieldElement {
    QVec coords;

    bool operator==(const FieldElement& o) const { return coords == o.coords; }
    bool is_zero() const {
        for (const auto& c : coords)
            if (c != 0) return false;
        return true;
    }
};

// Certified numerical embedding value at one place.
struct EmbeddedValue {
    int place = 0; // 0-based; real places first
    bool is_real = true;
    Interval re, im; // im is the zero interval at real places
    double radius = 0.0;
};

// Exact arithmetic in Q[x]/(f) plus certified embeddings into R^r1 x C^r2.
//
// Immutable after construction; the per-precision root cache is guarded by a
// mutex, so instances may be shared across threads.
class NumberField {
  public:
    // min_poly: monic with integer coefficients, ascending degree order.
    // Throws InvalidFieldSpec if not monic, constant, or not squarefree.
    // Irreducibility is the caller's responsibility.
    explicit NumberField(ZPoly min_poly, long precision_bits = 128, long precision_cap = 4096);

    int degree() const { return n_; }
    int r1() const { return r1_; }
    int r2() const { return r2_; }
    int unit_rank() const { return r1_ + r2_ - 1; }
    long precision_bits() const { return precision_bits_; }
    const ZPoly& min_poly() const { return f_; }
    PrecisionLadder ladder() const { return PrecisionLadder::from_base(precision_bits_, precision_cap_); }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement theta() const;
    FieldElement from_rational(const mpq_class& q) const;
    FieldElement element(QVec coords) const; // validates length n

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement inv(const FieldElement& a) const; // InversionOfZero, NonInvertible
    FieldElement pow(const FieldElement& a, long e) const;

    // Exact field norm (determinant of the multiplication-by-a matrix).
    mpq_class norm_exact(const FieldElement& a) const;

    // Enclosure of a^(j) at real place j (0 <= j < r1) with ~prec correct
    // bits (relative), escalating the internal root precision as needed.
    Interval embed_real(const FieldElement& a, int j, long prec) const;
    // Enclosure at complex place j (0 <= j < r2), upper-half representative.
    CInterval embed_complex(const FieldElement& a, int j, long prec) const;
    // Spec-facing view at this field's precision; place is 0-based over all
    // r1 + r2 places, reals first.
    EmbeddedValue embed(const FieldElement& a, int place) const;

    // arg of a at complex place j, in (-pi, pi].
    Interval arg_at_complex_place(const FieldElement& a, int j, long prec) const;

    // Certified: a^(j) > 0 at every real place (vacuous if r1 == 0).
    // Pre: a != 0. Throws PrecisionExhausted when a sign cannot be decided.
    bool is_totally_positive(const FieldElement& a) const;

    // e_j log |a^(j)| for j = 0..r1+r2-1 (e_j = 1 at real, 2 at complex).
    std::vector<Interval> log_embedding(const FieldElement& a, long prec) const;

    // Certified sign of det of the power-basis embedding matrix (rows are
    // the iota-coordinates of 1, theta, ..., theta^(n-1)); a field constant.
    int basis_embedding_sign() const;

    // Root enclosures at >= prec bits (cached).
    const RootSet& roots(long prec) const;

    // iota-coordinate row of a: (x^(1)..x^(r1), Re x^(r1+1), Im x^(r1+1), ...).
    std::vector<Interval> iota_row(const FieldElement& a, long prec) const;

  private:
    QVec reduce(QVec full) const; // reduce degree-(>=n) poly mod f

    ZPoly f_;
    int n_ = 0, r1_ = 0, r2_ = 0;
    long precision_bits_ = 128;
    long precision_cap_ = 4096;

    mutable std::mutex cache_mu_;
    mutable std::map<long, RootSet> root_cache_;
    mutable int basis_sign_cache_ = 0; // 0 = not computed
};

} // namespace sfd
