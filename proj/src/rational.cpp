#include "sfd/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "sfd/errors.hpp"

namespace sfd {

mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw SchemaError("empty rational literal");
    for (char c : s)
        if (!(std::isdigit((unsigned char)c) || c == '-' || c == '+' || c == '/'))
            throw SchemaError("malformed rational literal: " + s);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw SchemaError("malformed rational literal: " + s);
    q.canonicalize();
    if (q.get_den() == 0) throw SchemaError("zero denominator in rational literal: " + s);
    return q;
}

std::string rational_str(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    return c.get_str();
}

mpq_class qmat_det(QMat m) {
    const size_t n = m.size();
    mpq_class det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            mpq_class f = m[row][col] / m[col][col];
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

QVec qmat_solve(QMat m, QVec b) {
    const size_t n = m.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw std::domain_error("qmat_solve: singular matrix");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(b[piv], b[col]);
        }
        for (size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            mpq_class f = m[row][col] / m[col][col];
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
            b[row] -= f * b[col];
        }
    }
    QVec x(n);
    for (size_t i = n; i-- > 0;) {
        mpq_class s = b[i];
        for (size_t k = i + 1; k < n; ++k) s -= m[i][k] * x[k];
        x[i] = s / m[i][i];
    }
    return x;
}

bool qmat_is_singular(QMat m) { return qmat_det(std::move(m)) == 0; }

QMat qmat_inverse(QMat m) {
    const size_t n = m.size();
    QMat inv(n, QVec(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw std::domain_error("qmat_inverse: singular matrix");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(inv[piv], inv[col]);
        }
        mpq_class d = m[col][col];
        for (size_t k = 0; k < n; ++k) {
            m[col][k] /= d;
            inv[col][k] /= d;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            mpq_class f = m[row][col];
            for (size_t k = 0; k < n; ++k) {
                m[row][k] -= f * m[col][k];
                inv[row][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

mpz_class simplex_edge_det(const std::vector<IVec>& vertices) {
    const size_t n1 = vertices.empty() ? 0 : vertices.size() - 1;
    if (n1 == 0) return 1;
    QMat m(n1, QVec(n1));
    for (size_t col = 0; col < n1; ++col)
        for (size_t row = 0; row < n1; ++row)
            m[row][col] = mpq_class((long)(vertices[col + 1][row] - vertices[0][row]));
    mpq_class d = qmat_det(std::move(m));
    // integer vertices give an integer determinant
    mpz_class num = d.get_num();
    if (d.get_den() != 1) throw std::logic_error("simplex_edge_det: non-integer determinant");
    return num;
}

mpq_class round_to_denominator(const mpq_class& x, const mpz_class& max_den) {
    if (x.get_den() <= max_den) return x;
    // Continued-fraction convergents p_k/q_k of x; the last convergent with
    // q_k <= max_den, or a best intermediate fraction, minimizes |x - p/q|.
    mpz_class p_prev = 0, q_prev = 1;
    mpz_class p_cur = 1, q_cur = 0;
    mpq_class y = x;
    bool first = true;
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), y.get_num().get_mpz_t(), y.get_den().get_mpz_t());
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        if (!first && q_next > max_den) {
            // Semiconvergent: largest t with q = t*q_cur + q_prev <= max_den.
            mpz_class t = (max_den - q_prev) / q_cur;
            mpq_class semi(t * p_cur + p_prev, t * q_cur + q_prev);
            semi.canonicalize();
            mpq_class conv(p_cur, q_cur);
            conv.canonicalize();
            return (abs(x - semi) < abs(x - conv)) ? semi : conv;
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        first = false;
        mpq_class frac = y - mpq_class(a);
        if (frac == 0) break;
        y = 1 / frac;
    }
    mpq_class r(p_cur, q_cur);
    r.canonicalize();
    return r;
}

} // namespace sfd
