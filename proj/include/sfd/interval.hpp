#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfd/errors.hpp"

namespace sfd {

// RAII wrapper around mpfr_t with an explicit mantissa precision.
class Real {
  public:
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
};

// Closed interval [lo, hi] with directed-rounding endpoint arithmetic.
// Every operation returns an enclosure of the exact image; an interval with
// lo == hi represents an exact value.
class Interval {
  public:
    Interval() : Interval(2) {}
    explicit Interval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

    static Interval from_long(long v, mpfr_prec_t prec);
    static Interval from_mpz(const mpz_class& z, mpfr_prec_t prec);
    static Interval from_mpq(const mpq_class& q, mpfr_prec_t prec);
    static Interval from_double(double d, mpfr_prec_t prec);
    static Interval pi(mpfr_prec_t prec);
    // Endpoints given as exact rationals.
    static Interval from_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);

    mpfr_srcptr lo() const { return lo_.get(); }
    mpfr_srcptr hi() const { return hi_.get(); }
    mpfr_prec_t prec() const { return lo_.prec(); }

    bool is_exact() const { return mpfr_equal_p(lo_.get(), hi_.get()); }
    bool contains_zero() const;
    bool is_positive() const;             // certified lo > 0
    bool is_negative() const;             // certified hi < 0
    bool is_exact_zero() const;
    // +1 / -1 / 0 (exact zero); throws Indeterminate when undecided.
    int sign_certified() const;

    double mid_double() const;
    double wid_double() const;            // upper bound on hi - lo
    Real mid(mpfr_prec_t prec) const;
    // width <= 2^-bits * max(1, |interval|), evaluated in mpfr
    bool rel_width_leq(long bits) const;

    Interval operator-() const;
    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b); // throws Indeterminate if b straddles 0
    Interval& operator+=(const Interval& b) { *this = *this + b; return *this; }
    Interval& operator-=(const Interval& b) { *this = *this - b; return *this; }
    Interval& operator*=(const Interval& b) { *this = *this * b; return *this; }

    Interval mul_long(long k) const;
    Interval abs() const;
    Interval square() const;
    Interval sqrt() const;                // requires lo >= 0
    Interval log() const;                 // throws Indeterminate unless lo > 0
    Interval exp() const;
    Interval atan() const;
    Interval cos() const;
    Interval sin() const;
    Interval pow_long(long e) const;      // integer power; negative e requires no zero

    // Certified three-way compare: -1, 0 (both exact and equal), +1;
    // nullopt when the intervals overlap without being identical points.
    static std::optional<int> compare(const Interval& a, const Interval& b);
    // Certified compare against an exact integer.
    std::optional<int> compare_long(long v) const;

    // Unique integer ceil over the whole interval, if certified. An interval
    // that straddles an integer (without being exactly that integer point)
    // yields nullopt.
    std::optional<long> ceil_certified() const;

    std::string str(size_t digits = 20) const;

    // Assembles an interval from already-rounded endpoints (lo <= hi).
    static Interval raw(Real lo, Real hi);

  private:
    Real lo_, hi_;
};

// Rectangular complex interval.
class CInterval {
  public:
    CInterval() = default;
    CInterval(Interval re, Interval im) : re_(std::move(re)), im_(std::move(im)) {}

    static CInterval from_doubles(double re, double im, mpfr_prec_t prec) {
        return CInterval(Interval::from_double(re, prec), Interval::from_double(im, prec));
    }

    const Interval& re() const { return re_; }
    const Interval& im() const { return im_; }

    friend CInterval operator+(const CInterval& a, const CInterval& b);
    friend CInterval operator-(const CInterval& a, const CInterval& b);
    friend CInterval operator*(const CInterval& a, const CInterval& b);
    CInterval mul(const Interval& s) const;
    CInterval conj() const;
    Interval abs() const;
    Interval abs2() const;
    // Principal argument in (-pi, pi]. Throws Indeterminate if the box
    // contains 0 or meets the branch cut {re <= 0, im = 0}.
    Interval arg() const;

    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }

  private:
    Interval re_, im_;
};

// Doubling precision ladder for certified decisions.
struct PrecisionLadder {
    long start = 64;
    long cap = 4096;

    static PrecisionLadder from_base(long base_bits, long cap_bits = 4096) {
        PrecisionLadder l;
        l.start = base_bits < 64 ? base_bits : 64;
        l.cap = cap_bits > base_bits ? cap_bits : base_bits;
        return l;
    }
};

// Runs f(prec) for prec = start, 2*start, ... until it returns a value.
// f reports "cannot decide yet" by returning nullopt or throwing Indeterminate.
template <class F>
auto certify(const PrecisionLadder& lad, F&& f, const char* what = "certified decision")
    -> typename std::invoke_result_t<F, long>::value_type {
    for (long p = lad.start;; p *= 2) {
        if (p > lad.cap) break;
        try {
            if (auto r = f(p)) return *r;
        } catch (const Indeterminate&) {
        }
        if (p == lad.cap) break;
        if (p * 2 > lad.cap) p = lad.cap / 2; // land exactly on the cap
    }
    throw PrecisionExhausted(std::string(what) + ": undecided at precision cap");
}

// Interval linear algebra (dense, tiny dimensions).
using IMat = std::vector<std::vector<Interval>>;
using IVecI = std::vector<Interval>;

// Gaussian elimination; throws Indeterminate when no pivot can be certified
// nonzero. Returns the solution enclosure of M x = b.
IVecI interval_solve(IMat M, IVecI b);
// Determinant enclosure; pivots that straddle zero throw Indeterminate
// (a caller wanting "det == 0" must decide that by exact means).
Interval interval_det(IMat M);

} // namespace sfd
