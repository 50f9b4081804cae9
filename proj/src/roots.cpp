#include "sfd/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "sfd/errors.hpp"

namespace sfd {

namespace {

// --- midpoint (non-certified) complex arithmetic on mpfr -------------------

struct MpComplex {
    Real re, im;
    explicit MpComplex(mpfr_prec_t p) : re(p), im(p) {}
};

MpComplex mpc_from(const std::complex<double>& z, mpfr_prec_t p) {
    MpComplex r(p);
    mpfr_set_d(r.re.get(), z.real(), MPFR_RNDN);
    mpfr_set_d(r.im.get(), z.imag(), MPFR_RNDN);
    return r;
}

MpComplex mpc_sub(const MpComplex& a, const MpComplex& b, mpfr_prec_t p) {
    MpComplex r(p);
    mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    return r;
}

MpComplex mpc_mul(const MpComplex& a, const MpComplex& b, mpfr_prec_t p) {
    MpComplex r(p);
    Real t1(p), t2(p);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(r.re.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), t1.get(), t2.get(), MPFR_RNDN);
    return r;
}

MpComplex mpc_div(const MpComplex& a, const MpComplex& b, mpfr_prec_t p) {
    MpComplex r(p);
    Real d(p), t1(p), t2(p);
    mpfr_sqr(t1.get(), b.re.get(), MPFR_RNDN);
    mpfr_sqr(t2.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(d.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(r.re.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_div(r.re.get(), r.re.get(), d.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_div(r.im.get(), r.im.get(), d.get(), MPFR_RNDN);
    return r;
}

// f and f' at z by the Horner pair recurrence (midpoint arithmetic).
void mpc_eval_fdf(const ZPoly& f, const MpComplex& z, mpfr_prec_t p, MpComplex& fz, MpComplex& dfz) {
    MpComplex acc(p), dacc(p);
    mpfr_set_zero(acc.re.get(), 1);
    mpfr_set_zero(acc.im.get(), 1);
    mpfr_set_zero(dacc.re.get(), 1);
    mpfr_set_zero(dacc.im.get(), 1);
    for (size_t i = f.size(); i-- > 0;) {
        dacc = mpc_mul(dacc, z, p);
        mpfr_add(dacc.re.get(), dacc.re.get(), acc.re.get(), MPFR_RNDN);
        mpfr_add(dacc.im.get(), dacc.im.get(), acc.im.get(), MPFR_RNDN);
        acc = mpc_mul(acc, z, p);
        mpfr_add_z(acc.re.get(), acc.re.get(), f[i].get_mpz_t(), MPFR_RNDN);
    }
    fz = acc;
    dfz = dacc;
}

// --- double-precision Aberth seeds ------------------------------------------

std::vector<std::complex<double>> aberth_double(const ZPoly& f) {
    const int n = (int)f.size() - 1;
    std::vector<double> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = f[i].get_d();
    double radius = 0.0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i]));
    radius = std::min(1.0 + radius, 1e8);
    std::vector<std::complex<double>> z(n);
    for (int k = 0; k < n; ++k) {
        double ang = 2.0 * M_PI * (k + 0.25) / n + 0.3;
        z[k] = std::polar(std::max(0.5, radius / 2.0), ang);
    }
    auto eval = [&](std::complex<double> x, std::complex<double>& fx, std::complex<double>& dfx) {
        fx = 0.0;
        dfx = 0.0;
        for (int i = n; i >= 0; --i) {
            dfx = dfx * x + fx;
            fx = fx * x + c[i];
        }
    };
    for (int iter = 0; iter < 1000; ++iter) {
        double maxcorr = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> fx, dfx;
            eval(z[i], fx, dfx);
            if (std::abs(fx) == 0.0) continue;
            std::complex<double> w = fx / dfx;
            std::complex<double> s = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            std::complex<double> corr = w / (1.0 - w * s);
            z[i] -= corr;
            maxcorr = std::max(maxcorr, std::abs(corr) / (1.0 + std::abs(z[i])));
        }
        if (maxcorr < 1e-14) break;
    }
    return z;
}

// --- real root isolation (exact) --------------------------------------------

int sign_at(const ZPoly& f, const mpq_class& x) {
    return sgn(qpoly_eval(qpoly_from_z(f), x));
}

// Deflates monic integer f by the factor (x - a), a integer root.
ZPoly deflate_int_root(const ZPoly& f, const mpz_class& a) {
    const size_t n = f.size() - 1;
    ZPoly q(n); // degree n-1
    mpz_class carry = f[n];
    for (size_t i = n; i-- > 0;) {
        q[i] = carry;
        carry = f[i] + carry * a;
    }
    if (carry != 0) throw std::logic_error("deflate_int_root: not a root");
    return q;
}

struct Isolated {
    std::vector<mpq_class> exact; // exact rational (integer) roots
    ZPoly g;                      // remaining factor, no rational roots
    std::vector<std::pair<mpq_class, mpq_class>> brackets; // (a,b], one root each
};

Isolated isolate_real(const ZPoly& f_in) {
    Isolated out;
    ZPoly f = f_in;
    // Monic integer polynomials only have integer rational roots; peel them
    // off so bisection never lands on an exact zero.
    bool peeled = true;
    while (peeled && f.size() > 1) {
        peeled = false;
        mpz_class f0 = f[0];
        if (f0 == 0) {
            out.exact.emplace_back(0);
            f = deflate_int_root(f, 0);
            peeled = true;
            continue;
        }
        mpz_class bound = cauchy_root_bound(f);
        for (mpz_class d = 1; d <= abs(f0) && d < bound && !peeled; ++d) {
            if (abs(f0) % d != 0) continue;
            for (int s : {1, -1}) {
                mpz_class cand = d * s;
                if (sign_at(f, mpq_class(cand)) == 0) {
                    out.exact.emplace_back(cand);
                    f = deflate_int_root(f, cand);
                    peeled = true;
                    break;
                }
            }
        }
    }
    out.g = f;
    if (f.size() <= 1) return out;

    SturmChain st = sturm_chain(qpoly_from_z(f));
    mpz_class b = cauchy_root_bound(f);
    mpq_class lo(-b), hi(b);
    int total = st.count_roots(lo, hi);
    std::vector<std::pair<mpq_class, mpq_class>> work;
    if (total > 0) work.emplace_back(lo, hi);
    while (!work.empty()) {
        auto [a, c] = work.back();
        work.pop_back();
        int cnt = st.count_roots(a, c);
        if (cnt == 0) continue;
        if (cnt == 1) {
            out.brackets.emplace_back(a, c);
            continue;
        }
        mpq_class m = (a + c) / 2;
        work.emplace_back(a, m);
        work.emplace_back(m, c);
    }
    std::sort(out.brackets.begin(), out.brackets.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

// Shrinks a sign-change bracket of g below the target width. Newton steps in
// mpfr provide candidates; every acceptance is an exact sign check.
RealRootEnc refine_bracket(const ZPoly& g, mpq_class lo, mpq_class hi, long prec) {
    // bring (lo, hi] to an open sign-change bracket [lo, hi]
    int slo = sign_at(g, lo);
    int shi = sign_at(g, hi);
    if (slo == 0 || shi == 0) throw std::logic_error("refine_bracket: endpoint root");
    if (slo == shi) throw std::logic_error("refine_bracket: no sign change");

    mpq_class target_w(mpz_class(1), mpz_class(1) << (unsigned)(prec + 24));
    mpq_class scale = std::max(abs(lo), abs(hi)) + 1;
    target_w *= scale;

    auto width = [&]() { return hi - lo; };
    int since_newton = 0;
    while (width() > target_w) {
        // a few plain bisections between Newton attempts
        for (int k = 0; k < 8 && width() > target_w; ++k) {
            mpq_class m = (lo + hi) / 2;
            int sm = sign_at(g, m);
            if (sm == 0) throw std::logic_error("refine_bracket: unexpected rational root");
            if (sm == slo)
                lo = m;
            else
                hi = m;
        }
        if (width() <= target_w) break;
        ++since_newton;
        if (since_newton < 2) continue; // get a decent bracket first
        // Newton polish from the midpoint at generous precision
        long p = prec + 96;
        Real z(p), t(p), fz(p), dfz(p);
        mpq_class mid = (lo + hi) / 2;
        mpfr_set_q(z.get(), mid.get_mpq_t(), MPFR_RNDN);
        long iters = 4 + (long)std::ceil(std::log2((double)std::max<long>(prec, 2)));
        for (long it = 0; it < iters; ++it) {
            mpfr_set_zero(fz.get(), 1);
            mpfr_set_zero(dfz.get(), 1);
            for (size_t i = g.size(); i-- > 0;) {
                mpfr_mul(dfz.get(), dfz.get(), z.get(), MPFR_RNDN);
                mpfr_add(dfz.get(), dfz.get(), fz.get(), MPFR_RNDN);
                mpfr_mul(fz.get(), fz.get(), z.get(), MPFR_RNDN);
                mpfr_add_z(fz.get(), fz.get(), g[i].get_mpz_t(), MPFR_RNDN);
            }
            if (mpfr_zero_p(dfz.get())) break;
            mpfr_div(t.get(), fz.get(), dfz.get(), MPFR_RNDN);
            mpfr_sub(z.get(), z.get(), t.get(), MPFR_RNDN);
        }
        // candidate bracket [c-h, c+h] validated by exact signs
        mpq_class c;
        {
            mpq_class tmp;
            mpfr_get_q(tmp.get_mpq_t(), z.get());
            c = tmp;
        }
        mpq_class h = target_w / 4;
        mpq_class cl = c - h, ch = c + h;
        if (cl > lo && ch < hi) {
            int scl = sign_at(g, cl);
            int sch = sign_at(g, ch);
            if (scl != 0 && sch != 0 && scl != sch) {
                lo = cl;
                hi = ch;
                slo = scl;
                break;
            }
        }
    }
    return RealRootEnc{lo, hi};
}

// --- Weierstrass disk certification ------------------------------------------

struct Candidate {
    Real re, im; // exact dyadic point (midpoint approximation)
    bool is_real;
    bool upper; // representative with Im > 0
    Candidate(mpfr_prec_t p) : re(p), im(p), is_real(false), upper(false) {}
};

CInterval cinterval_point(const Candidate& c, mpfr_prec_t p) {
    Interval re(p), im(p);
    re = Interval::raw(c.re, c.re);
    im = Interval::raw(c.im, c.im);
    return CInterval(re, im);
}

CInterval cinterval_eval_poly(const ZPoly& f, const CInterval& z, mpfr_prec_t p) {
    CInterval acc(Interval::from_long(0, p), Interval::from_long(0, p));
    for (size_t i = f.size(); i-- > 0;) {
        acc = acc * z;
        acc = CInterval(acc.re() + Interval::from_mpz(f[i], p), acc.im());
    }
    return acc;
}

} // namespace

int count_real_roots(const ZPoly& monic_f) {
    std::size_t deg = monic_f.size() - 1;
    if (deg == 0) return 0;
    QPoly f = qpoly_from_z(monic_f);
    // Count distinct real roots of the squarefree part.
    QPoly g = qpoly_gcd(f, qpoly_derivative(f));
    if (qpoly_deg(g) > 0) {
        // divide out repeated factors (g divides f exactly)
        QPoly quot;
        {
            QPoly a = f;
            int db = qpoly_deg(g);
            quot.assign(a.size() - g.size() + 1, mpq_class(0));
            while (qpoly_deg(a) >= db) {
                mpq_class c = a.back() / g.back();
                size_t shift = a.size() - g.size();
                quot[shift] = c;
                for (size_t i = 0; i < g.size(); ++i) a[shift + i] -= c * g[i];
                qpoly_trim(a);
                if (a.empty()) break;
            }
        }
        f = quot;
    }
    SturmChain st = sturm_chain(f);
    mpz_class b = 1;
    for (const auto& c : f) {
        mpq_class a = abs(c);
        mpz_class ceilv = a.get_num() / a.get_den() + 1;
        if (ceilv > b) b = ceilv;
    }
    b += 1;
    return st.count_roots(mpq_class(-b), mpq_class(b));
}

RootSet find_roots(const ZPoly& monic_f, long prec, const PrecisionLadder& ladder) {
    const int n = (int)monic_f.size() - 1;
    if (n <= 0) throw InvalidFieldSpec("find_roots: degree must be positive");

    Isolated iso = isolate_real(monic_f);

    RootSet rs;
    rs.prec = prec;

    // Exact rational roots of the full polynomial.
    std::vector<RealRootEnc> reals;
    for (const auto& a : iso.exact) reals.push_back(RealRootEnc{a, a});
    for (auto& [a, b] : iso.brackets) reals.push_back(refine_bracket(iso.g, a, b, prec));
    std::sort(reals.begin(), reals.end(), [](const RealRootEnc& x, const RealRootEnc& y) {
        return x.lo < y.lo;
    });
    rs.real_roots = std::move(reals);

    const int r1 = (int)rs.real_roots.size();
    const int n_complex = n - r1;
    if (n_complex % 2 != 0) throw std::logic_error("find_roots: odd complex root count");
    const int r2 = n_complex / 2;
    if (r2 == 0) return rs;

    // Upper-half candidates from double Aberth, refined by mpfr Newton.
    std::vector<std::complex<double>> seeds_all = aberth_double(monic_f);
    std::vector<std::complex<double>> seeds;
    for (auto& z : seeds_all)
        if (z.imag() > 1e-9) seeds.push_back(z);
    // If double precision failed to separate real and complex roots we still
    // continue: the certification pass below is what decides, and it will
    // escalate before giving up.
    std::sort(seeds.begin(), seeds.end(), [](auto a, auto b) {
        return a.imag() > b.imag();
    });
    if ((int)seeds.size() > r2) seeds.resize(r2);

    for (long p = std::max<long>(ladder.start, prec + 64);; p *= 2) {
        if (p > std::max(ladder.cap, prec + 64) * 4) throw PrecisionExhausted("complex root certification failed");
        bool ok = true;
        std::vector<Candidate> cands;
        // refined complex candidates
        std::vector<MpComplex> zs;
        for (auto& s : seeds) {
            MpComplex z = mpc_from(s, p);
            long iters = 6 + (long)std::ceil(std::log2((double)p));
            for (long it = 0; it < iters; ++it) {
                MpComplex fz(p), dfz(p);
                mpc_eval_fdf(monic_f, z, p, fz, dfz);
                if (mpfr_zero_p(dfz.re.get()) && mpfr_zero_p(dfz.im.get())) break;
                MpComplex corr = mpc_div(fz, dfz, p);
                z = mpc_sub(z, corr, p);
            }
            zs.push_back(z);
        }
        if ((int)zs.size() != r2) {
            // fall back: re-run Aberth entirely in higher precision via seeds
            // perturbation (rare; desk-scale polynomials resolve in doubles)
            throw PrecisionExhausted("complex root seeding failed");
        }
        for (auto& z : zs) {
            Candidate c(p);
            c.re = z.re;
            c.im = z.im;
            c.upper = true;
            cands.push_back(c);
            Candidate cc(p);
            cc.re = z.re;
            mpfr_neg(cc.im.get(), z.im.get(), MPFR_RNDN);
            cands.push_back(cc);
        }
        for (const auto& rr : rs.real_roots) {
            Candidate c(p);
            mpq_class mid = (rr.lo + rr.hi) / 2;
            mpfr_set_q(c.re.get(), mid.get_mpq_t(), MPFR_RNDN);
            mpfr_set_zero(c.im.get(), 1);
            c.is_real = true;
            cands.push_back(c);
        }
        // Weierstrass radii: n * |f(z_i) / prod_{j != i} (z_i - z_j)|
        std::vector<Interval> radius;
        std::vector<CInterval> pts;
        for (auto& c : cands) pts.push_back(cinterval_point(c, p));
        for (size_t i = 0; i < cands.size() && ok; ++i) {
            CInterval fz = cinterval_eval_poly(monic_f, pts[i], p);
            Interval denom2 = Interval::from_long(1, p);
            for (size_t j = 0; j < cands.size(); ++j) {
                if (j == i) continue;
                denom2 = denom2 * (pts[i] - pts[j]).abs2();
            }
            if (denom2.contains_zero()) {
                ok = false;
                break;
            }
            Interval r2abs = fz.abs2() / denom2;
            Interval rad = r2abs.sqrt().mul_long(n);
            radius.push_back(rad);
        }
        if (ok) {
            // pairwise disjoint disks
            for (size_t i = 0; i < cands.size() && ok; ++i)
                for (size_t j = i + 1; j < cands.size() && ok; ++j) {
                    Interval d = (pts[i] - pts[j]).abs();
                    Interval sum = radius[i] + radius[j];
                    if (!(mpfr_greater_p(d.lo(), sum.hi()))) ok = false;
                }
        }
        // enclosure width target
        if (ok) {
            Real tw(p);
            mpfr_set_ui(tw.get(), 1, MPFR_RNDN);
            mpfr_div_2ui(tw.get(), tw.get(), (unsigned long)(prec + 16), MPFR_RNDN);
            for (size_t i = 0; i < cands.size() && ok; ++i) {
                if (!cands[i].upper) continue;
                if (mpfr_cmp(radius[i].hi(), tw.get()) > 0) ok = false;
                // strictly above the real axis
                Real margin(p);
                mpfr_sub(margin.get(), cands[i].im.get(), radius[i].hi(), MPFR_RNDN);
                if (mpfr_sgn(margin.get()) <= 0) ok = false;
            }
        }
        if (ok) {
            for (size_t i = 0; i < cands.size(); ++i) {
                if (!cands[i].upper) continue;
                Real rlo(p), rhi(p), ilo(p), ihi(p);
                mpfr_sub(rlo.get(), cands[i].re.get(), radius[i].hi(), MPFR_RNDD);
                mpfr_add(rhi.get(), cands[i].re.get(), radius[i].hi(), MPFR_RNDU);
                mpfr_sub(ilo.get(), cands[i].im.get(), radius[i].hi(), MPFR_RNDD);
                mpfr_add(ihi.get(), cands[i].im.get(), radius[i].hi(), MPFR_RNDU);
                rs.complex_roots.push_back(
                    ComplexRootEnc{Interval::raw(rlo, rhi), Interval::raw(ilo, ihi)});
            }
            break;
        }
    }

    // Sort representatives by ascending real part; if the real-part boxes
    // overlap (exactly equal real parts), fall back to the imaginary part.
    // Insertion sort with an explicit tri-state comparison so an undecidable
    // pair is reported instead of silently misordered.
    auto before = [](const ComplexRootEnc& a, const ComplexRootEnc& b) {
        auto c = Interval::compare(a.re, b.re);
        if (c.has_value() && *c != 0) return *c < 0;
        auto ci = Interval::compare(a.im, b.im);
        if (ci.has_value() && *ci != 0) return *ci < 0;
        throw PrecisionExhausted("complex place ordering undecided");
    };
    for (size_t i = 1; i < rs.complex_roots.size(); ++i) {
        ComplexRootEnc cur = rs.complex_roots[i];
        size_t j = i;
        while (j > 0 && before(cur, rs.complex_roots[j - 1])) {
            rs.complex_roots[j] = rs.complex_roots[j - 1];
            --j;
        }
        rs.complex_roots[j] = cur;
    }
    return rs;
}

} // namespace sfd
