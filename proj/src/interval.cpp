#include "sfd/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfd {

namespace {

mpfr_prec_t max_prec(const Interval& a, const Interval& b) {
    return std::max(a.prec(), b.prec());
}

} // namespace

Interval Interval::from_long(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
    mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
    return r;
}

Interval Interval::from_mpz(const mpz_class& z, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_mpq(const mpq_class& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_double(double d, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_d(r.lo_.get(), d, MPFR_RNDD);
    mpfr_set_d(r.hi_.get(), d, MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
    mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::from_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

bool Interval::is_positive() const { return mpfr_sgn(lo_.get()) > 0; }
bool Interval::is_negative() const { return mpfr_sgn(hi_.get()) < 0; }

bool Interval::is_exact_zero() const {
    return mpfr_zero_p(lo_.get()) && mpfr_zero_p(hi_.get());
}

int Interval::sign_certified() const {
    if (is_positive()) return 1;
    if (is_negative()) return -1;
    if (is_exact_zero()) return 0;
    throw Indeterminate("interval sign straddles zero");
}

double Interval::mid_double() const {
    return 0.5 * (mpfr_get_d(lo_.get(), MPFR_RNDN) + mpfr_get_d(hi_.get(), MPFR_RNDN));
}

double Interval::wid_double() const {
    Real w(prec());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

Real Interval::mid(mpfr_prec_t p) const {
    Real m(p);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
}

bool Interval::rel_width_leq(long bits) const {
    mpfr_prec_t p = prec();
    Real w(p), scale(p);
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_abs(scale.get(), lo_.get(), MPFR_RNDD);
    Real ah(p);
    mpfr_abs(ah.get(), hi_.get(), MPFR_RNDD);
    mpfr_max(scale.get(), scale.get(), ah.get(), MPFR_RNDD);
    if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDD);
    mpfr_mul_2si(scale.get(), scale.get(), -bits, MPFR_RNDD);
    return mpfr_cmp(w.get(), scale.get()) <= 0;
}

Interval Interval::operator-() const {
    Interval r(prec());
    mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_add(r.lo_.get(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_sub(r.lo_.get(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi(), b.lo(), MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    mpfr_prec_t p = max_prec(a, b);
    Interval r(p);
    Real t(p);
    // lo: minimum of the four endpoint products rounded down
    mpfr_mul(r.lo_.get(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_mul(t.get(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
    mpfr_mul(t.get(), a.hi(), b.lo(), MPFR_RNDD);
    mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
    mpfr_mul(t.get(), a.hi(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
    // hi: maximum rounded up
    mpfr_mul(r.hi_.get(), a.lo(), b.lo(), MPFR_RNDU);
    mpfr_mul(t.get(), a.lo(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    mpfr_mul(t.get(), a.hi(), b.lo(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    mpfr_mul(t.get(), a.hi(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    return r;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw Indeterminate("interval division by interval containing zero");
    mpfr_prec_t p = max_prec(a, b);
    Interval r(p);
    Real t(p);
    mpfr_div(r.lo_.get(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_div(t.get(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
    mpfr_div(t.get(), a.hi(), b.lo(), MPFR_RNDD);
    mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
    mpfr_div(t.get(), a.hi(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
    mpfr_div(r.hi_.get(), a.lo(), b.lo(), MPFR_RNDU);
    mpfr_div(t.get(), a.lo(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    mpfr_div(t.get(), a.hi(), b.lo(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    mpfr_div(t.get(), a.hi(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    return r;
}

Interval Interval::mul_long(long k) const {
    Interval r(prec());
    if (k >= 0) {
        mpfr_mul_si(r.lo_.get(), lo_.get(), k, MPFR_RNDD);
        mpfr_mul_si(r.hi_.get(), hi_.get(), k, MPFR_RNDU);
    } else {
        mpfr_mul_si(r.lo_.get(), hi_.get(), k, MPFR_RNDD);
        mpfr_mul_si(r.hi_.get(), lo_.get(), k, MPFR_RNDU);
    }
    return r;
}

Interval Interval::abs() const {
    Interval r(prec());
    if (!contains_zero()) {
        if (mpfr_sgn(lo_.get()) > 0) return *this;
        return -*this;
    }
    mpfr_set_zero(r.lo_.get(), 1);
    Real nl(prec());
    mpfr_neg(nl.get(), lo_.get(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), nl.get(), hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::square() const {
    Interval a = abs();
    Interval r(prec());
    mpfr_sqr(r.lo_.get(), a.lo(), MPFR_RNDD);
    mpfr_sqr(r.hi_.get(), a.hi(), MPFR_RNDU);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_.get()) < 0) throw Indeterminate("sqrt of interval with negative lower bound");
    Interval r(prec());
    mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::log() const {
    if (mpfr_sgn(lo_.get()) <= 0) throw Indeterminate("log of interval not strictly positive");
    Interval r(prec());
    mpfr_log(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::exp() const {
    Interval r(prec());
    mpfr_exp(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::atan() const {
    Interval r(prec());
    mpfr_atan(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_atan(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

// |cos'| <= 1, so cos([a,b]) is within wid(I) of cos(a).
Interval Interval::cos() const {
    mpfr_prec_t p = prec();
    Interval r(p);
    Real w(p);
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_cos(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_cos(r.hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_sub(r.lo_.get(), r.lo_.get(), w.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), r.hi_.get(), w.get(), MPFR_RNDU);
    return r;
}

Interval Interval::sin() const {
    mpfr_prec_t p = prec();
    Interval r(p);
    Real w(p);
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_sin(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_sin(r.hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_sub(r.lo_.get(), r.lo_.get(), w.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), r.hi_.get(), w.get(), MPFR_RNDU);
    return r;
}

Interval Interval::pow_long(long e) const {
    Interval base = *this;
    if (e < 0) {
        base = Interval::from_long(1, prec()) / base;
        e = -e;
    }
    Interval acc = Interval::from_long(1, prec());
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

std::optional<int> Interval::compare(const Interval& a, const Interval& b) {
    if (mpfr_less_p(a.hi(), b.lo())) return -1;
    if (mpfr_greater_p(a.lo(), b.hi())) return 1;
    if (a.is_exact() && b.is_exact() && mpfr_equal_p(a.lo(), b.lo())) return 0;
    return std::nullopt;
}

std::optional<int> Interval::compare_long(long v) const {
    if (mpfr_cmp_si(hi_.get(), v) < 0) return -1;
    if (mpfr_cmp_si(lo_.get(), v) > 0) return 1;
    if (is_exact() && mpfr_cmp_si(lo_.get(), v) == 0) return 0;
    return std::nullopt;
}

std::optional<long> Interval::ceil_certified() const {
    Real cl(prec()), ch(prec());
    mpfr_ceil(cl.get(), lo_.get());
    mpfr_ceil(ch.get(), hi_.get());
    if (!mpfr_equal_p(cl.get(), ch.get())) return std::nullopt;
    // If an endpoint is an exact integer the interval may represent either a
    // value exactly at the integer or just below it; only the exact-point
    // case is decidable.
    if (mpfr_integer_p(lo_.get()) && !(is_exact())) return std::nullopt;
    if (!mpfr_fits_slong_p(cl.get(), MPFR_RNDN)) return std::nullopt;
    return mpfr_get_si(cl.get(), MPFR_RNDN);
}

std::string Interval::str(size_t digits) const {
    std::ostringstream os;
    char* s1 = nullptr;
    char* s2 = nullptr;
    mpfr_asprintf(&s1, "%.*Rg", (int)digits, lo_.get());
    mpfr_asprintf(&s2, "%.*Rg", (int)digits, hi_.get());
    os << "[" << s1 << ", " << s2 << "]";
    mpfr_free_str(s1);
    mpfr_free_str(s2);
    return os.str();
}

CInterval operator+(const CInterval& a, const CInterval& b) {
    return CInterval(a.re() + b.re(), a.im() + b.im());
}

CInterval operator-(const CInterval& a, const CInterval& b) {
    return CInterval(a.re() - b.re(), a.im() - b.im());
}

CInterval operator*(const CInterval& a, const CInterval& b) {
    return CInterval(a.re() * b.re() - a.im() * b.im(), a.re() * b.im() + a.im() * b.re());
}

CInterval CInterval::mul(const Interval& s) const { return CInterval(re_ * s, im_ * s); }

CInterval CInterval::conj() const { return CInterval(re_, -im_); }

Interval CInterval::abs2() const { return re_.square() + im_.square(); }

Interval CInterval::abs() const { return abs2().sqrt(); }

Interval CInterval::arg() const {
    if (contains_zero()) throw Indeterminate("arg of box containing zero");
    // Branch cut {re <= 0, im = 0}: conservative rejection.
    if (im_.contains_zero() && mpfr_sgn(re_.lo()) <= 0)
        throw Indeterminate("arg of box meeting the branch cut");
    mpfr_prec_t p = std::max(re_.prec(), im_.prec());
    // The extreme angles over a box avoiding 0 and the cut are attained at
    // corners.
    Real t(p);
    bool first = true;
    mpfr_srcptr res[2] = {re_.lo(), re_.hi()};
    mpfr_srcptr ims[2] = {im_.lo(), im_.hi()};
    Real lo(p), hi(p);
    for (auto rr : res) {
        for (auto ii : ims) {
            mpfr_atan2(t.get(), ii, rr, MPFR_RNDD);
            if (first)
                mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            else
                mpfr_min(lo.get(), lo.get(), t.get(), MPFR_RNDD);
            mpfr_atan2(t.get(), ii, rr, MPFR_RNDU);
            if (first)
                mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            else
                mpfr_max(hi.get(), hi.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    return Interval::raw(std::move(lo), std::move(hi));
}

Interval Interval::raw(Real lo, Real hi) {
    Interval out(lo.prec());
    out.lo_ = std::move(lo);
    out.hi_ = std::move(hi);
    return out;
}

IVecI interval_solve(IMat M, IVecI b) {
    const size_t n = M.size();
    if (n == 0) return {};
    // forward elimination with pivot = largest midpoint magnitude
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t col = 0; col < n; ++col) {
        size_t best = col;
        double bestmag = -1;
        for (size_t row = col; row < n; ++row) {
            double m = std::abs(M[row][col].mid_double());
            if (m > bestmag) {
                bestmag = m;
                best = row;
            }
        }
        std::swap(M[col], M[best]);
        std::swap(b[col], b[best]);
        if (M[col][col].contains_zero()) throw Indeterminate("interval solve: pivot straddles zero");
        for (size_t row = col + 1; row < n; ++row) {
            Interval f = M[row][col] / M[col][col];
            for (size_t k = col; k < n; ++k) M[row][k] = M[row][k] - f * M[col][k];
            b[row] = b[row] - f * b[col];
        }
    }
    IVecI x(n, Interval(M[0][0].prec()));
    for (size_t i = n; i-- > 0;) {
        Interval s = b[i];
        for (size_t k = i + 1; k < n; ++k) s = s - M[i][k] * x[k];
        x[i] = s / M[i][i];
    }
    return x;
}

Interval interval_det(IMat M) {
    const size_t n = M.size();
    if (n == 0) return Interval::from_long(1, 64);
    mpfr_prec_t p = M[0][0].prec();
    int sign = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t best = col;
        double bestmag = -1;
        for (size_t row = col; row < n; ++row) {
            double m = std::abs(M[row][col].mid_double());
            if (m > bestmag) {
                bestmag = m;
                best = row;
            }
        }
        if (best != col) {
            std::swap(M[col], M[best]);
            sign = -sign;
        }
        if (M[col][col].contains_zero()) throw Indeterminate("interval det: pivot straddles zero");
        for (size_t row = col + 1; row < n; ++row) {
            Interval f = M[row][col] / M[col][col];
            for (size_t k = col; k < n; ++k) M[row][k] = M[row][k] - f * M[col][k];
        }
    }
    Interval d = Interval::from_long(sign, p);
    for (size_t i = 0; i < n; ++i) d = d * M[i][i];
    return d;
}

} // namespace sfd
