#include "sfd/twisters.hpp"

#include <cmath>

#include "sfd/errors.hpp"

namespace sfd {

namespace {

long long pos_mod(long long a, long long n) {
    long long m = a % n;
    return m < 0 ? m + n : m;
}

// rotate z by -theta0 where theta0 = 2 pi c / N
CInterval rotate_back(const CInterval& z, long long c, long long N, long prec) {
    Interval theta = Interval::pi(prec).mul_long(2 * (long)c) / Interval::from_long((long)N, prec);
    Interval ct = theta.cos(), st = theta.sin();
    Interval wre = z.re() * ct + z.im() * st;
    Interval wim = z.im() * ct - z.re() * st;
    return CInterval(wre, wim);
}

struct WindowResult {
    bool inside;    // |dev| < limit certified
    double dev_hi;  // upper bound on |deviation|
    double half_lo; // lower bound on the full half-width
};

// Certified test of |arg(z) - 2 pi c/N| < limit_frac * (pi/2 - pi/N).
std::optional<WindowResult> window_check(const CInterval& z, long long c, long long N,
                                         double limit_frac, long prec) {
    CInterval w = rotate_back(z, c, N, prec);
    Interval half = Interval::pi(prec) *
                    (Interval::from_mpq(mpq_class(1, 2), prec) -
                     Interval::from_long(1, prec) / Interval::from_long((long)N, prec));
    WindowResult res{};
    res.half_lo = mpfr_get_d(half.lo(), MPFR_RNDD);
    if (w.re().is_negative() || w.re().is_exact_zero()) {
        // deviation at least pi/2: certainly outside any window
        res.inside = false;
        res.dev_hi = M_PI;
        return res;
    }
    if (!w.re().is_positive()) return std::nullopt;
    Interval dev = (w.im() / w.re()).atan().abs();
    Interval limit = half * Interval::from_double(limit_frac, prec);
    if (mpfr_cmp(dev.hi(), limit.lo()) < 0) {
        res.inside = true;
        res.dev_hi = mpfr_get_d(dev.hi(), MPFR_RNDU);
        return res;
    }
    if (mpfr_cmp(dev.lo(), limit.hi()) > 0) {
        res.inside = false;
        res.dev_hi = mpfr_get_d(dev.hi(), MPFR_RNDU);
        return res;
    }
    return std::nullopt;
}

} // namespace

Twister::Twister(std::shared_ptr<const NumberField> field, std::vector<long long> N)
    : field_(std::move(field)), N_(std::move(N)) {
    if (field_ && (int)N_.size() != field_->r2())
        throw BadSectorCount("twister needs r2 sector counts");
}

std::vector<long long> Twister::class_of(const IVec& x) const {
    if (!field_) throw Error("twister is not bound to a field");
    const int r = field_->unit_rank();
    const int r2 = field_->r2();
    if ((int)x.size() < r + r2) throw Error("twister lookup: vector too short");
    std::vector<long long> cls(r2);
    for (int j = 0; j < r2; ++j) cls[j] = pos_mod(x[r + j], N_[j]);
    return cls;
}

void Twister::set_entry(const std::vector<long long>& cls, FieldElement beta) {
    if ((int)cls.size() != (int)N_.size()) throw Error("twister class tuple size mismatch");
    for (size_t j = 0; j < cls.size(); ++j)
        if (cls[j] < 0 || cls[j] >= N_[j]) throw Error("twister class out of range");
    table_[cls] = std::move(beta);
}

const FieldElement& Twister::entry(const std::vector<long long>& cls) const {
    auto it = table_.find(cls);
    if (it == table_.end()) throw Error("twister table entry missing");
    return it->second;
}

bool Twister::complete() const {
    size_t want = 1;
    for (auto n : N_) want *= (size_t)n;
    return table_.size() == want;
}

const FieldElement& Twister::lookup(const IVec& x) const { return entry(class_of(x)); }

TwisterReport validate_twister(const NumberField& field, const Twister& tw) {
    TwisterReport rep;
    rep.complete = tw.complete();
    rep.all_ok = rep.complete;
    const auto& N = tw.sector_counts();
    for (const auto& [cls, beta] : tw.table()) {
        TwisterWindowCheck chk;
        chk.cls = cls;
        chk.totally_positive = !beta.is_zero() && field.is_totally_positive(beta);
        chk.ok = chk.totally_positive;
        for (size_t j = 0; j < cls.size(); ++j) {
            WindowResult wr = certify(field.ladder(), [&](long p) {
                CInterval z = field.embed_complex(beta, (int)j, p);
                return window_check(z, cls[j], N[j], 1.0, p);
            }, "twister argument window");
            chk.deviation.push_back(wr.dev_hi);
            chk.halfwidth.push_back(wr.half_lo);
            double slack = wr.half_lo > 0 ? 1.0 - wr.dev_hi / wr.half_lo : 0.0;
            chk.slack.push_back(slack);
            if (!wr.inside) chk.ok = false;
            if (chk.ok) rep.min_slack = std::min(rep.min_slack, slack);
        }
        if (!chk.ok) rep.all_ok = false;
        rep.entries.push_back(std::move(chk));
    }
    return rep;
}

Twister construct_twister(std::shared_ptr<const NumberField> field,
                          const std::vector<long long>& N, double margin, long denom_bound) {
    if ((int)N.size() != field->r2()) throw BadSectorCount("need r2 sector counts");
    for (auto n : N)
        if (n < 3) throw BadSectorCount("sector count N_j must be >= 3");
    if (margin <= 0 || margin >= 1) throw Error("twister margin must be in (0,1)");
    if (denom_bound < 1) throw Error("denominator bound must be >= 1");

    const int n = field->degree();
    const int r1 = field->r1(), r2 = field->r2();
    Twister tw(field, N);
    if (r2 == 0) {
        tw.set_entry({}, field->one());
        return tw;
    }

    const long prec = std::max<long>(256, field->precision_bits());
    // power-basis embedding matrix (iota rows as columns)
    IMat E(n, IVecI(n, Interval(prec)));
    {
        FieldElement cur = field->one();
        for (int col = 0; col < n; ++col) {
            auto row = field->iota_row(cur, prec);
            for (int i = 0; i < n; ++i) E[i][col] = row[i];
            if (col + 1 < n) cur = field->mul(cur, field->theta());
        }
    }

    // classes in lexicographic order
    std::vector<std::vector<long long>> classes;
    std::vector<long long> cls(r2, 0);
    while (true) {
        classes.push_back(cls);
        int j = r2 - 1;
        while (j >= 0 && ++cls[j] == N[j]) cls[j--] = 0;
        if (j < 0) break;
    }

    for (const auto& c : classes) {
        // target iota vector (1,...,1, cos, sin, ...)
        IVecI target(n, Interval(prec));
        for (int i = 0; i < r1; ++i) target[i] = Interval::from_long(1, prec);
        for (int j = 0; j < r2; ++j) {
            Interval theta = Interval::pi(prec).mul_long(2 * (long)c[j]) /
                             Interval::from_long((long)N[j], prec);
            target[r1 + 2 * j] = theta.cos();
            target[r1 + 2 * j + 1] = theta.sin();
        }
        IVecI sol = interval_solve(E, target);

        bool placed = false;
        for (long D = denom_bound; D <= (1L << 40); D *= 2) {
            QVec coords(n);
            for (int i = 0; i < n; ++i) {
                mpq_class exact;
                mpfr_get_q(exact.get_mpq_t(), sol[i].mid(prec).get());
                coords[i] = round_to_denominator(exact, mpz_class(D));
            }
            FieldElement cand = field->element(std::move(coords));
            if (cand.is_zero()) continue;
            bool ok = true;
            try {
                if (!field->is_totally_positive(cand)) ok = false;
                PrecisionLadder vet{64, std::min<long>(field->ladder().cap, 1024)};
                for (int j = 0; j < r2 && ok; ++j) {
                    WindowResult wr = certify(vet, [&](long p) {
                        CInterval z = field->embed_complex(cand, j, p);
                        return window_check(z, c[j], N[j], 1.0 - margin, p);
                    }, "twister candidate window");
                    if (!wr.inside) ok = false;
                }
            } catch (const PrecisionExhausted&) {
                ok = false; // borderline candidate: grow the denominator
            }
            if (ok) {
                tw.set_entry(c, std::move(cand));
                placed = true;
                break;
            }
        }
        if (!placed)
            throw TwisterSearchFailed("no valid twister entry for a class at denominator cap");
    }
    return tw;
}

} // namespace sfd
