#include "sfd/poly.hpp"

namespace sfd {

QPoly qpoly_from_z(const ZPoly& f) {
    QPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = mpq_class(f[i]);
    qpoly_trim(r);
    return r;
}

void qpoly_trim(QPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int qpoly_deg(const QPoly& f) { return (int)f.size() - 1; }

mpq_class qpoly_eval(const QPoly& f, const mpq_class& x) {
    mpq_class acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

QPoly qpoly_derivative(const QPoly& f) {
    if (f.size() <= 1) return {};
    QPoly d(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i] * (long)i;
    return d;
}

QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    qpoly_trim(r);
    return r;
}

QPoly qpoly_rem(QPoly a, const QPoly& b) {
    qpoly_trim(a);
    int db = qpoly_deg(b);
    while (qpoly_deg(a) >= db && db >= 0) {
        mpq_class f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        qpoly_trim(a);
    }
    return a;
}

QPoly qpoly_gcd(QPoly a, QPoly b) {
    qpoly_trim(a);
    qpoly_trim(b);
    while (!b.empty()) {
        QPoly r = qpoly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        mpq_class lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

int SturmChain::sign_variations_at(const mpq_class& x) const {
    int vars = 0;
    int last = 0;
    for (const auto& p : chain) {
        int s = sgn(qpoly_eval(p, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++vars;
        last = s;
    }
    return vars;
}

int SturmChain::count_roots(const mpq_class& a, const mpq_class& b) const {
    return sign_variations_at(a) - sign_variations_at(b);
}

SturmChain sturm_chain(const QPoly& f) {
    SturmChain s;
    s.chain.push_back(f);
    QPoly d = qpoly_derivative(f);
    if (!d.empty()) s.chain.push_back(d);
    while (s.chain.size() >= 2) {
        QPoly r = qpoly_rem(s.chain[s.chain.size() - 2], s.chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        s.chain.push_back(std::move(r));
    }
    return s;
}

mpz_class cauchy_root_bound(const ZPoly& f) {
    mpz_class m = 0;
    for (const auto& c : f) {
        mpz_class a = abs(c);
        if (a > m) m = a;
    }
    return m + 1;
}

} // namespace sfd
