#include "sfd/numfield.hpp"

#include <algorithm>
#include <cmath>

#include "sfd/errors.hpp"

namespace sfd {

namespace {

long norm_prec(long prec) {
    long p = 64;
    while (p < prec) p *= 2;
    return p;
}

} // namespace

NumberField::NumberField(ZPoly min_poly, long precision_bits, long precision_cap)
    : f_(std::move(min_poly)), precision_bits_(precision_bits), precision_cap_(precision_cap) {
    while (!f_.empty() && f_.back() == 0) f_.pop_back();
    if (f_.size() < 2) throw InvalidFieldSpec("min_poly must have degree >= 1");
    if (f_.back() != 1) throw InvalidFieldSpec("min_poly must be monic");
    n_ = (int)f_.size() - 1;
    QPoly fq = qpoly_from_z(f_);
    QPoly g = qpoly_gcd(fq, qpoly_derivative(fq));
    if (qpoly_deg(g) > 0) throw InvalidFieldSpec("min_poly has repeated factors (reducible)");
    r1_ = count_real_roots(f_);
    if ((n_ - r1_) % 2 != 0) throw InvalidFieldSpec("inconsistent signature");
    r2_ = (n_ - r1_) / 2;
}

FieldElement NumberField::zero() const { return FieldElement{QVec(n_, mpq_class(0))}; }

FieldElement NumberField::one() const {
    QVec c(n_, mpq_class(0));
    c[0] = 1;
    return FieldElement{std::move(c)};
}

FieldElement NumberField::theta() const {
    QVec c(n_, mpq_class(0));
    if (n_ == 1) {
        // theta is a rational number in the degree-1 case: x - f0
        c[0] = -mpq_class(f_[0]);
    } else {
        c[1] = 1;
    }
    return FieldElement{std::move(c)};
}

FieldElement NumberField::from_rational(const mpq_class& q) const {
    QVec c(n_, mpq_class(0));
    c[0] = q;
    return FieldElement{std::move(c)};
}

FieldElement NumberField::element(QVec coords) const {
    if ((int)coords.size() != n_) throw InvalidFieldSpec("element coordinate count != degree");
    return FieldElement{std::move(coords)};
}

FieldElement NumberField::add(const FieldElement& a, const FieldElement& b) const {
    QVec c(n_);
    for (int i = 0; i < n_; ++i) c[i] = a.coords[i] + b.coords[i];
    return FieldElement{std::move(c)};
}

FieldElement NumberField::sub(const FieldElement& a, const FieldElement& b) const {
    QVec c(n_);
    for (int i = 0; i < n_; ++i) c[i] = a.coords[i] - b.coords[i];
    return FieldElement{std::move(c)};
}

FieldElement NumberField::neg(const FieldElement& a) const {
    QVec c(n_);
    for (int i = 0; i < n_; ++i) c[i] = -a.coords[i];
    return FieldElement{std::move(c)};
}

QVec NumberField::reduce(QVec full) const {
    for (size_t d = full.size(); d-- > (size_t)n_;) {
        if (full[d] == 0) continue;
        mpq_class c = full[d];
        full[d] = 0;
        // theta^d = theta^(d-n) * (theta^n) = theta^(d-n) * (-f_0 - ... - f_{n-1} theta^{n-1})
        for (int k = 0; k < n_; ++k) full[d - n_ + k] -= c * mpq_class(f_[k]);
    }
    full.resize(n_, mpq_class(0));
    return full;
}

FieldElement NumberField::mul(const FieldElement& a, const FieldElement& b) const {
    QVec full(2 * n_ - 1, mpq_class(0));
    for (int i = 0; i < n_; ++i) {
        if (a.coords[i] == 0) continue;
        for (int j = 0; j < n_; ++j) {
            if (b.coords[j] == 0) continue;
            full[i + j] += a.coords[i] * b.coords[j];
        }
    }
    return FieldElement{reduce(std::move(full))};
}

FieldElement NumberField::inv(const FieldElement& a) const {
    if (a.is_zero()) throw InversionOfZero("inverse of zero field element");
    // extended Euclid in Q[x]: r0 = f, r1 = a; track t with t*a = r (mod f)
    QPoly r0 = qpoly_from_z(f_);
    QPoly r1 = a.coords;
    qpoly_trim(r1);
    QPoly t0, t1{mpq_class(1)};
    while (!r1.empty() && qpoly_deg(r1) > 0) {
        // quotient and remainder of r0 / r1
        QPoly q, rem = r0;
        int db = qpoly_deg(r1);
        q.assign(std::max<size_t>(rem.size() - r1.size() + 1, 1), mpq_class(0));
        while (qpoly_deg(rem) >= db) {
            mpq_class c = rem.back() / r1.back();
            size_t shift = rem.size() - r1.size();
            q[shift] = c;
            for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= c * r1[i];
            qpoly_trim(rem);
            if (rem.empty()) break;
        }
        QPoly t2 = t0;
        QPoly qt = qpoly_mul(q, t1);
        t2.resize(std::max(t2.size(), qt.size()), mpq_class(0));
        for (size_t i = 0; i < qt.size(); ++i) t2[i] -= qt[i];
        qpoly_trim(t2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r1.empty()) {
        // gcd(f, a) = r0 with deg > 0: a is a zero divisor
        throw NonInvertible("zero divisor: min_poly is reducible");
    }
    mpq_class c = r1[0];
    QVec res(n_, mpq_class(0));
    for (size_t i = 0; i < t1.size(); ++i) res[i] = t1[i] / c;
    return FieldElement{std::move(res)};
}

FieldElement NumberField::pow(const FieldElement& a, long e) const {
    FieldElement base = a;
    if (e < 0) {
        base = inv(base);
        e = -e;
    }
    FieldElement acc = one();
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return acc;
}

mpq_class NumberField::norm_exact(const FieldElement& a) const {
    // Determinant of multiplication by a in the power basis.
    QMat m(n_, QVec(n_));
    FieldElement cur = a;
    for (int col = 0; col < n_; ++col) {
        for (int row = 0; row < n_; ++row) m[row][col] = cur.coords[row];
        if (col + 1 < n_) {
            // cur <- theta * cur
            QVec shifted(n_ + 1, mpq_class(0));
            for (int i = 0; i < n_; ++i) shifted[i + 1] = cur.coords[i];
            cur = FieldElement{reduce(std::move(shifted))};
        }
    }
    return qmat_det(std::move(m));
}

const RootSet& NumberField::roots(long prec) const {
    long p = norm_prec(prec);
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = root_cache_.find(p);
    if (it != root_cache_.end()) return it->second;
    RootSet rs = find_roots(f_, p, PrecisionLadder{64, std::max(precision_cap_, p * 4)});
    auto [pos, inserted] = root_cache_.emplace(p, std::move(rs));
    return pos->second;
}

Interval NumberField::embed_real(const FieldElement& a, int j, long prec) const {
    if (j < 0 || j >= r1_) throw Error("embed_real: place out of range");
    if (a.is_zero()) return Interval::from_long(0, norm_prec(prec));
    for (long work = norm_prec(prec + 32);; work *= 2) {
        if (work > precision_cap_ * 4)
            throw PrecisionExhausted("embed_real: requested relative width unreachable");
        const RootSet& rs = roots(work);
        Interval rho = rs.real_roots[j].to_interval(work);
        Interval acc = Interval::from_long(0, work);
        for (size_t i = a.coords.size(); i-- > 0;) {
            acc = acc * rho + Interval::from_mpq(a.coords[i], work);
        }
        if (acc.is_exact() || acc.rel_width_leq(prec)) return acc;
    }
}

CInterval NumberField::embed_complex(const FieldElement& a, int j, long prec) const {
    if (j < 0 || j >= r2_) throw Error("embed_complex: place out of range");
    long p0 = norm_prec(prec);
    if (a.is_zero()) return CInterval(Interval::from_long(0, p0), Interval::from_long(0, p0));
    for (long work = norm_prec(prec + 32);; work *= 2) {
        if (work > precision_cap_ * 4)
            throw PrecisionExhausted("embed_complex: requested relative width unreachable");
        const RootSet& rs = roots(work);
        CInterval rho(rs.complex_roots[j].re, rs.complex_roots[j].im);
        CInterval acc(Interval::from_long(0, work), Interval::from_long(0, work));
        for (size_t i = a.coords.size(); i-- > 0;) {
            acc = acc * rho;
            acc = CInterval(acc.re() + Interval::from_mpq(a.coords[i], work), acc.im());
        }
        if ((acc.re().is_exact() || acc.re().rel_width_leq(prec)) &&
            (acc.im().is_exact() || acc.im().rel_width_leq(prec)))
            return acc;
    }
}

EmbeddedValue NumberField::embed(const FieldElement& a, int place) const {
    if (place < 0 || place >= r1_ + r2_) throw Error("embed: place out of range");
    EmbeddedValue ev;
    ev.place = place;
    if (place < r1_) {
        ev.is_real = true;
        ev.re = embed_real(a, place, precision_bits_);
        ev.im = Interval::from_long(0, ev.re.prec());
        ev.radius = 0.5 * ev.re.wid_double();
    } else {
        ev.is_real = false;
        CInterval z = embed_complex(a, place - r1_, precision_bits_);
        ev.re = z.re();
        ev.im = z.im();
        ev.radius = 0.5 * std::max(ev.re.wid_double(), ev.im.wid_double());
    }
    return ev;
}

Interval NumberField::arg_at_complex_place(const FieldElement& a, int j, long prec) const {
    CInterval z = embed_complex(a, j, prec);
    return z.arg();
}

bool NumberField::is_totally_positive(const FieldElement& a) const {
    if (a.is_zero()) throw Error("is_totally_positive: zero element");
    // rational elements decide exactly
    bool rational = true;
    for (int i = 1; i < n_; ++i)
        if (a.coords[i] != 0) rational = false;
    if (rational) return a.coords[0] > 0;
    for (int j = 0; j < r1_; ++j) {
        int s = certify(ladder(), [&](long p) -> std::optional<int> {
            Interval v = embed_real(a, j, p);
            if (v.is_positive()) return 1;
            if (v.is_negative()) return -1;
            return std::nullopt;
        }, "is_totally_positive sign");
        if (s < 0) return false;
    }
    return true;
}

std::vector<Interval> NumberField::log_embedding(const FieldElement& a, long prec) const {
    if (a.is_zero()) throw Error("log_embedding: zero element");
    std::vector<Interval> out;
    out.reserve(r1_ + r2_);
    for (int j = 0; j < r1_; ++j) {
        Interval v = certify(ladder(), [&](long p) -> std::optional<Interval> {
            Interval x = embed_real(a, j, std::max(p, prec)).abs();
            if (!x.is_positive()) return std::nullopt;
            return x;
        }, "log_embedding nonzero");
        out.push_back(v.log());
    }
    for (int j = 0; j < r2_; ++j) {
        Interval v = certify(ladder(), [&](long p) -> std::optional<Interval> {
            Interval x = embed_complex(a, j, std::max(p, prec)).abs2();
            if (!x.is_positive()) return std::nullopt;
            return x;
        }, "log_embedding nonzero");
        out.push_back(v.log()); // log |a|^2 = 2 log |a| = e_j log |a|
    }
    return out;
}

std::vector<Interval> NumberField::iota_row(const FieldElement& a, long prec) const {
    std::vector<Interval> row;
    row.reserve(n_);
    for (int j = 0; j < r1_; ++j) row.push_back(embed_real(a, j, prec));
    for (int j = 0; j < r2_; ++j) {
        CInterval z = embed_complex(a, j, prec);
        row.push_back(z.re());
        row.push_back(z.im());
    }
    return row;
}

int NumberField::basis_embedding_sign() const {
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        if (basis_sign_cache_ != 0) return basis_sign_cache_;
    }
    int s = certify(ladder(), [&](long p) -> std::optional<int> {
        IMat m;
        FieldElement cur = one();
        for (int i = 0; i < n_; ++i) {
            m.push_back(iota_row(cur, p));
            if (i + 1 < n_) cur = mul(cur, theta());
        }
        try {
            Interval d = interval_det(std::move(m));
            if (d.is_positive()) return 1;
            if (d.is_negative()) return -1;
        } catch (const Indeterminate&) {
        }
        return std::nullopt;
    }, "basis embedding determinant sign");
    std::lock_guard<std::mutex> lock(cache_mu_);
    basis_sign_cache_ = s;
    return s;
}

} // namespace sfd
