#include "sfd/complexes.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "sfd/errors.hpp"

namespace sfd {

namespace {

mpz_class factorial(long n) {
    mpz_class f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

IVec vec_sub(const IVec& a, const IVec& b) {
    IVec d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

IVec vec_add(const IVec& a, const IVec& b) {
    IVec d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] + b[i];
    return d;
}

bool is_zero_vec(const IVec& v) {
    for (auto x : v)
        if (x != 0) return false;
    return true;
}

// certified three-way comparison of A(u) vs A(v): sign of omega(u-v) - (k_v - k_u)
std::optional<int> compare_A(const LinearForm& omega, const IVec& u, long long ku, const IVec& v,
                             long long kv, long prec) {
    IVec d = vec_sub(u, v);
    if (is_zero_vec(d)) return 0;
    Interval w = omega.eval(d, prec);
    return w.compare_long((long)(kv - ku));
}

} // namespace

LinearForm LinearForm::zero() { return LinearForm{}; }

LinearForm LinearForm::from_doubles(std::vector<double> coeffs) {
    LinearForm f;
    bool allz = true;
    for (double c : coeffs)
        if (c != 0.0) allz = false;
    if (allz) return f;
    f.zero_ = false;
    f.active_ = (int)coeffs.size();
    f.coeff_ = [cs = std::move(coeffs)](int i, long prec) {
        return Interval::from_double(cs[i], prec);
    };
    return f;
}

LinearForm LinearForm::from_provider(int active, CoeffFn fn) {
    LinearForm f;
    f.zero_ = active == 0;
    f.active_ = active;
    f.coeff_ = std::move(fn);
    return f;
}

LinearForm LinearForm::unit_args(std::shared_ptr<const NumberField> field,
                                 std::vector<FieldElement> units, long long Nj, int place_j) {
    LinearForm f;
    f.zero_ = units.empty();
    f.active_ = (int)units.size();
    if (f.zero_) return f;
    f.coeff_ = [field, us = std::move(units), Nj, place_j](int i, long prec) {
        Interval a = field->arg_at_complex_place(us[i], place_j, prec);
        Interval twopi = Interval::pi(prec).mul_long(2);
        return a.mul_long((long)Nj) / twopi;
    };
    return f;
}

Interval LinearForm::eval(const IVec& u, long prec) const {
    Interval acc = Interval::from_long(0, prec);
    if (zero_) return acc;
    for (int i = 0; i < active_ && i < (int)u.size(); ++i) {
        if (u[i] == 0) continue;
        acc = acc + coeff_(i, prec).mul_long((long)u[i]);
    }
    return acc;
}

AValue upper_fractional(const LinearForm& omega, const IVec& u, const PrecisionLadder& ladder) {
    return certify(ladder, [&](long prec) -> std::optional<AValue> {
        Interval w = omega.eval(u, prec);
        auto c = w.ceil_certified();
        if (!c.has_value()) return std::nullopt;
        long long k = 1 - *c;
        Interval a = w + Interval::from_long((long)k, prec);
        return AValue{k, a};
    }, "upper fractional part");
}

std::vector<int> reorder_A(const OrderedSimplex& s, const LinearForm& omega,
                           const PrecisionLadder& ladder) {
    const int m = (int)s.vertices.size();
    std::vector<long long> k(m);
    for (int i = 0; i < m; ++i) k[i] = upper_fractional(omega, s.vertices[i], ladder).k;
    // insertion sort with certified comparisons; ties fall back to stored rank
    auto before = [&](int i, int j) {
        int c = certify(ladder, [&](long prec) -> std::optional<int> {
            return compare_A(omega, s.vertices[i], k[i], s.vertices[j], k[j], prec);
        }, "A-value comparison");
        if (c != 0) return c < 0;
        return i < j;
    };
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    for (int i = 1; i < m; ++i) {
        int cur = perm[i];
        int j = i;
        while (j > 0 && before(cur, perm[j - 1])) {
            perm[j] = perm[j - 1];
            --j;
        }
        perm[j] = cur;
    }
    return perm;
}

OrderedComplex raise(const OrderedComplex& X, const LinearForm& omega, long M1, long M2,
                     const PrecisionLadder& ladder, std::vector<RaiseRecord>* records) {
    if (M1 >= M2) throw Error("raise: M1 must be < M2");
    OrderedComplex Y;
    Y.dim = X.dim + 1;
    Y.lattice = X.lattice;
    Y.lattice.push_back(M2 - M1);
    if (records) records->clear();

    for (size_t alpha = 0; alpha < X.simplices.size(); ++alpha) {
        const OrderedSimplex& S = X.simplices[alpha];
        const int m = (int)S.vertices.size(); // p + 1
        std::vector<long long> k(m);
        for (int i = 0; i < m; ++i) k[i] = upper_fractional(omega, S.vertices[i], ladder).k;
        std::vector<int> perm = reorder_A(S, omega, ladder);

        for (int jj = 0; jj < m; ++jj) {
            const IVec& chosen = S.vertices[perm[jj]];
            for (long ell = M1; ell < M2; ++ell) {
                // A-ranks 0..jj get level k_i + ell, ranks jj..p get
                // k_i + ell - 1; the chosen vertex appears at both levels
                struct NewVert {
                    int orig_rank;
                    IVec v;
                    long long last;
                };
                std::vector<NewVert> nv;
                nv.reserve(m + 1);
                for (int ii = 0; ii <= jj; ++ii) {
                    IVec w = S.vertices[perm[ii]];
                    long long lv = k[perm[ii]] + ell;
                    w.push_back(lv);
                    nv.push_back({perm[ii], std::move(w), lv});
                }
                for (int ii = jj; ii < m; ++ii) {
                    IVec w = S.vertices[perm[ii]];
                    long long lv = k[perm[ii]] + ell - 1;
                    w.push_back(lv);
                    nv.push_back({perm[ii], std::move(w), lv});
                }
                // stored order: project-first by the stored order of S,
                // ties by descending last coordinate
                std::sort(nv.begin(), nv.end(), [](const NewVert& a, const NewVert& b) {
                    if (a.orig_rank != b.orig_rank) return a.orig_rank < b.orig_rank;
                    return a.last > b.last;
                });
                OrderedSimplex T;
                T.vertices.reserve(nv.size());
                for (auto& x : nv) T.vertices.push_back(std::move(x.v));
                T.provenance = OrderedSimplex::Provenance{alpha, chosen, ell};
                Y.simplices.push_back(std::move(T));
                if (records) records->push_back(RaiseRecord{alpha, chosen, ell, k[perm[jj]]});
            }
        }
    }
    return Y;
}

LinearForm stage_form(std::shared_ptr<const NumberField> field,
                      const std::vector<FieldElement>& units, const std::vector<long long>& N,
                      int j) {
    return LinearForm::unit_args(field, units, N[j], j);
}

DomainComplex build_domain_complex(std::shared_ptr<const NumberField> field,
                                   const std::vector<FieldElement>& units,
                                   const std::vector<long long>& N) {
    const int r1 = field->r1(), r2 = field->r2();
    const int r = r1 + r2 - 1;
    if ((int)units.size() != r)
        throw InvalidFieldSpec("unit count must be r1 + r2 - 1 = " + std::to_string(r));
    if ((int)N.size() != r2) throw BadSectorCount("need exactly r2 sector counts");
    for (auto n : N)
        if (n < 3) throw BadSectorCount("sector count N_j must be >= 3");
    for (const auto& u : units) {
        if (u.is_zero() || !field->is_totally_positive(u))
            throw UnitNotTotallyPositive("every unit must be totally positive");
    }
    // Independence: the log-embedding rows must have full rank, equivalently
    // the regulator-bordered matrix has certifiably nonzero determinant.
    if (r > 0) {
        bool independent = true;
        try {
            certify(PrecisionLadder{128, 2048}, [&](long p) -> std::optional<int> {
                IMat m;
                m.emplace_back();
                for (int jcol = 0; jcol < r1 + r2; ++jcol)
                    m[0].push_back(Interval::from_long(1, p));
                // e_j-weighted logs scale columns by 2 at complex places,
                // which cannot change the determinant sign
                for (int i = 0; i < r; ++i) m.push_back(field->log_embedding(units[i], p));
                try {
                    Interval d = interval_det(std::move(m));
                    if (d.is_positive()) return 1;
                    if (d.is_negative()) return -1;
                } catch (const Indeterminate&) {
                }
                return std::nullopt;
            }, "unit independence");
        } catch (const PrecisionExhausted&) {
            independent = false;
        }
        if (!independent)
            throw UnitsNotIndependent("unit log-embedding matrix is numerically singular");
    }

    OrderedComplex X;
    X.dim = 0;
    X.simplices.push_back(OrderedSimplex{{IVec{}}, std::nullopt});
    std::vector<std::vector<SectorEntry>> meta(1);

    LinearForm zform = LinearForm::zero();
    std::vector<RaiseRecord> recs;
    for (int i = 0; i < r; ++i) {
        X = raise(X, zform, 0, 1, field->ladder(), &recs);
        std::vector<std::vector<SectorEntry>> nm(X.simplices.size());
        for (size_t s = 0; s < recs.size(); ++s) nm[s] = meta[recs[s].parent];
        meta = std::move(nm);
    }
    for (int j = 0; j < r2; ++j) {
        LinearForm form = stage_form(field, units, N, j);
        X = raise(X, form, 0, (long)N[j], field->ladder(), &recs);
        std::vector<std::vector<SectorEntry>> nm(X.simplices.size());
        for (size_t s = 0; s < recs.size(); ++s) {
            nm[s] = meta[recs[s].parent];
            nm[s].push_back(SectorEntry{recs[s].k + recs[s].ell - 1, recs[s].vertex});
        }
        meta = std::move(nm);
    }

    mpz_class expect = factorial(field->degree() - 1);
    for (auto n : N) expect *= (long)n;
    if (mpz_class((long)X.simplices.size()) != expect)
        throw Error("internal: complex cardinality mismatch");

    DomainComplex out;
    out.X = std::move(X);
    out.sectors.entries = std::move(meta);
    return out;
}

Interval omega_j(const NumberField& field, const std::vector<FieldElement>& units,
                 const std::vector<long long>& N, int j, const QVec& kappa, long prec) {
    const int r = (int)units.size();
    Interval acc = (int)kappa.size() > r + j ? Interval::from_mpq(kappa[r + j], prec)
                                             : Interval::from_long(0, prec);
    Interval twopi = Interval::pi(prec).mul_long(2);
    for (int l = 0; l < r && l < (int)kappa.size(); ++l) {
        if (kappa[l] == 0) continue;
        Interval a = field.arg_at_complex_place(units[l], j, prec);
        acc = acc + Interval::from_mpq(kappa[l], prec) * a.mul_long((long)N[j]) / twopi;
    }
    return acc;
}

std::optional<QVec> barycentric(const OrderedSimplex& s, const QVec& x) {
    const int p = s.dim();
    if ((int)x.size() != p) throw Error("barycentric: dimension mismatch");
    QVec t(p + 1, mpq_class(0));
    if (p == 0) {
        t[0] = 1;
        return t;
    }
    QMat m(p, QVec(p));
    QVec rhs(p);
    for (int col = 0; col < p; ++col)
        for (int row = 0; row < p; ++row)
            m[row][col] = mpq_class((long)(s.vertices[col + 1][row] - s.vertices[0][row]));
    for (int row = 0; row < p; ++row) rhs[row] = x[row] - mpq_class((long)s.vertices[0][row]);
    QVec sol;
    try {
        sol = qmat_solve(std::move(m), std::move(rhs));
    } catch (const std::domain_error&) {
        return std::nullopt; // degenerate simplex contains no full-dim points
    }
    mpq_class sum = 0;
    for (int i = 0; i < p; ++i) {
        t[i + 1] = sol[i];
        sum += sol[i];
    }
    t[0] = 1 - sum;
    for (auto& c : t)
        if (c < 0) return std::nullopt;
    return t;
}

namespace {

bool inside_vertex_box(const OrderedSimplex& s, const QVec& x) {
    const int p = s.dim();
    for (int c = 0; c < p; ++c) {
        std::int64_t lo = s.vertices[0][c], hi = lo;
        for (const auto& v : s.vertices) {
            lo = std::min(lo, v[c]);
            hi = std::max(hi, v[c]);
        }
        if (x[c] < (long)lo || x[c] > (long)hi) return false;
    }
    return true;
}

} // namespace

std::vector<IVec> spanning_vertices(const OrderedComplex& X, const QVec& x) {
    for (const auto& s : X.simplices) {
        if (!inside_vertex_box(s, x)) continue;
        auto t = barycentric(s, x);
        if (!t.has_value()) continue;
        std::vector<IVec> out;
        for (size_t i = 0; i < t->size(); ++i)
            if ((*t)[i] > 0) out.push_back(s.vertices[i]);
        return out;
    }
    throw PointOutsideComplex("point not contained in any simplex");
}

std::vector<IVec> spanning_vertices(const OrderedComplex& X, const std::vector<double>& x,
                                    double tol) {
    QVec xq;
    for (double c : x) xq.push_back(mpq_class(c));
    for (const auto& s : X.simplices) {
        auto t = barycentric(s, xq);
        if (!t.has_value()) continue;
        std::vector<IVec> out;
        for (size_t i = 0; i < t->size(); ++i) {
            double td = (*t)[i].get_d();
            if (std::abs(td) <= tol)
                throw AmbiguousBarycentric("barycentric coordinate within tolerance of 0");
            if (td > tol) out.push_back(s.vertices[i]);
        }
        return out;
    }
    throw PointOutsideComplex("point not contained in any simplex");
}

mpz_class total_abs_edge_det(const OrderedComplex& X) {
    mpz_class sum = 0;
    for (const auto& s : X.simplices) sum += abs(simplex_edge_det(s.vertices));
    return sum;
}

namespace {

// affine functional g(x) = coeffs . x + c0
struct AffineFn {
    QVec coeffs;
    mpq_class c0;
    mpq_class eval(const QVec& x) const {
        mpq_class s = c0;
        for (size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i];
        return s;
    }
};

// barycentric functionals of a full-dimensional simplex (p+1 affine maps);
// nullopt for a degenerate vertex set
std::optional<std::vector<AffineFn>> barycentric_functionals(const OrderedSimplex& s) {
    const int p = s.dim();
    std::vector<AffineFn> fns(p + 1);
    if (p == 0) {
        fns[0].c0 = 1;
        return fns;
    }
    QMat m(p, QVec(p));
    for (int col = 0; col < p; ++col)
        for (int row = 0; row < p; ++row)
            m[row][col] = mpq_class((long)(s.vertices[col + 1][row] - s.vertices[0][row]));
    QMat inv;
    try {
        inv = qmat_inverse(std::move(m));
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    for (int i = 1; i <= p; ++i) {
        fns[i].coeffs = inv[i - 1];
        mpq_class c = 0;
        for (int j = 0; j < p; ++j) c += inv[i - 1][j] * mpq_class((long)s.vertices[0][j]);
        fns[i].c0 = -c;
    }
    fns[0].coeffs.assign(p, mpq_class(0));
    fns[0].c0 = 1;
    for (int i = 1; i <= p; ++i) {
        for (int j = 0; j < p; ++j) fns[0].coeffs[j] -= fns[i].coeffs[j];
        fns[0].c0 -= fns[i].c0;
    }
    return fns;
}

// All vertices of {x : g(x) >= 0 for all g} in dimension p, enumerated as
// solutions of p active constraints.
std::vector<QVec> polytope_vertices(const std::vector<AffineFn>& fns, int p) {
    std::vector<QVec> verts;
    if (p == 0) {
        QVec origin;
        for (const auto& g : fns)
            if (g.eval(origin) < 0) return verts;
        verts.push_back(origin);
        return verts;
    }
    const int m = (int)fns.size();
    std::vector<int> idx(p);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == p) {
            QMat a(p, QVec(p));
            QVec b(p);
            for (int i = 0; i < p; ++i) {
                a[i] = fns[idx[i]].coeffs;
                b[i] = -fns[idx[i]].c0;
            }
            if (qmat_is_singular(a)) return;
            QVec x = qmat_solve(std::move(a), std::move(b));
            for (const auto& g : fns)
                if (g.eval(x) < 0) return;
            for (const auto& v : verts)
                if (v == x) return;
            verts.push_back(std::move(x));
            return;
        }
        for (int i = start; i < m; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return verts;
}

std::string vec_str(const IVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

} // namespace

LambdaReport lambda_complex_check(const OrderedComplex& X, const LambdaCheckOptions& opt) {
    LambdaReport rep;
    const int p = X.dim;
    const size_t ns = X.simplices.size();
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (rep.failures.size() < 50) rep.failures.push_back(msg);
    };

    // --- (i) simplicial: pairwise intersections along common faces --------
    std::vector<std::optional<std::vector<AffineFn>>> fns(ns);
    for (size_t i = 0; i < ns; ++i) {
        fns[i] = barycentric_functionals(X.simplices[i]);
        if (!fns[i].has_value())
            fail(rep.simplicial, "simplex " + std::to_string(i) + " is degenerate");
    }
    // integer bounding boxes: disjoint boxes cannot intersect at all
    std::vector<IVec> bb_lo(ns), bb_hi(ns);
    for (size_t i = 0; i < ns; ++i) {
        bb_lo[i] = bb_hi[i] = X.simplices[i].vertices.empty() ? IVec(p, 0)
                                                              : X.simplices[i].vertices[0];
        for (const auto& v : X.simplices[i].vertices)
            for (int c = 0; c < p; ++c) {
                bb_lo[i][c] = std::min(bb_lo[i][c], v[c]);
                bb_hi[i][c] = std::max(bb_hi[i][c], v[c]);
            }
    }
    auto boxes_meet = [&](size_t a, size_t b) {
        for (int c = 0; c < p; ++c)
            if (bb_hi[a][c] < bb_lo[b][c] || bb_hi[b][c] < bb_lo[a][c]) return false;
        return true;
    };
    // One barycentric functional of S that is <= 0 on every vertex of T with
    // zero set exactly the shared vertices certifies S cap T = hull(shared):
    // points of T on its zero hyperplane are convex combinations of the
    // shared vertices only.
    auto face_certificate = [&](size_t sa, size_t sb, const std::set<IVec>& shared) {
        const auto& SA = X.simplices[sa];
        const auto& SB = X.simplices[sb];
        for (size_t i = 0; i < SA.vertices.size(); ++i) {
            if (shared.count(SA.vertices[i])) continue;
            bool ok = true;
            for (const auto& u : SB.vertices) {
                QVec uq(u.size());
                for (size_t c = 0; c < u.size(); ++c) uq[c] = mpq_class((long)u[c]);
                mpq_class val = (*fns[sa])[i].eval(uq);
                if (val > 0 || (val == 0 && !shared.count(u))) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
        return false;
    };
    for (size_t a = 0; a < ns && rep.simplicial; ++a) {
        for (size_t b = a + 1; b < ns && rep.simplicial; ++b) {
            if (!fns[a] || !fns[b]) continue;
            if (!boxes_meet(a, b)) continue;
            const auto& SA = X.simplices[a];
            const auto& SB = X.simplices[b];
            std::set<IVec> shared;
            for (const auto& v : SA.vertices)
                for (const auto& w : SB.vertices)
                    if (v == w) shared.insert(v);
            if (face_certificate(a, b, shared) || face_certificate(b, a, shared)) continue;
            std::vector<AffineFn> all = *fns[a];
            all.insert(all.end(), fns[b]->begin(), fns[b]->end());
            std::vector<QVec> verts = polytope_vertices(all, p);
            for (const auto& x : verts) {
                bool in_face = true;
                for (size_t i = 0; i < SA.vertices.size(); ++i) {
                    if (shared.count(SA.vertices[i])) continue;
                    if ((*fns[a])[i].eval(x) != 0) in_face = false;
                }
                if (!in_face) {
                    fail(rep.simplicial, "simplices " + std::to_string(a) + "," +
                                             std::to_string(b) +
                                             " intersect outside their common face");
                    break;
                }
            }
        }
    }

    // --- (ii) order compatibility on shared vertices -----------------------
    std::vector<std::map<IVec, int>> ranks(ns);
    for (size_t i = 0; i < ns; ++i)
        for (int v = 0; v < (int)X.simplices[i].vertices.size(); ++v)
            ranks[i][X.simplices[i].vertices[v]] = v;
    for (size_t a = 0; a < ns && rep.orders_compatible; ++a) {
        for (size_t b = a + 1; b < ns && rep.orders_compatible; ++b) {
            if (!boxes_meet(a, b)) continue;
            const auto& VA = X.simplices[a].vertices;
            std::vector<std::pair<int, int>> common;
            for (int i = 0; i < (int)VA.size(); ++i) {
                auto it = ranks[b].find(VA[i]);
                if (it != ranks[b].end()) common.emplace_back(i, it->second);
            }
            for (size_t i = 0; i < common.size(); ++i)
                for (size_t j = i + 1; j < common.size(); ++j) {
                    bool lt_a = common[i].first < common[j].first;
                    bool lt_b = common[i].second < common[j].second;
                    if (lt_a != lt_b)
                        fail(rep.orders_compatible,
                             "incompatible orders between simplices " + std::to_string(a) +
                                 " and " + std::to_string(b));
                }
        }
    }

    // --- (iii) lattice invariance of orders ---------------------------------
    std::vector<IVec> gens;
    for (int c = 0; c < p; ++c) {
        IVec g(p, 0);
        g[c] = X.lattice[c];
        gens.push_back(g);
        g[c] = -X.lattice[c];
        gens.push_back(g);
    }
    for (size_t a = 0; a < ns && rep.orders_lambda_invariant; ++a) {
        for (const auto& lam : gens) {
            for (size_t b = 0; b < ns; ++b) {
                // shifted bounding boxes must meet for any pair to exist
                bool meet = true;
                for (int c = 0; c < p; ++c)
                    if (bb_hi[a][c] + lam[c] < bb_lo[b][c] || bb_hi[b][c] < bb_lo[a][c] + lam[c])
                        meet = false;
                if (!meet) continue;
                std::vector<std::pair<int, int>> pairs;
                for (const auto& [v, ra] : ranks[a]) {
                    auto it = ranks[b].find(vec_add(v, lam));
                    if (it != ranks[b].end()) pairs.emplace_back(ra, it->second);
                }
                for (size_t i = 0; i < pairs.size(); ++i)
                    for (size_t j = i + 1; j < pairs.size(); ++j) {
                        bool lt_a = pairs[i].first < pairs[j].first;
                        bool lt_b = pairs[i].second < pairs[j].second;
                        if (lt_a != lt_b)
                            fail(rep.orders_lambda_invariant,
                                 "order not invariant under translation " + vec_str(lam));
                    }
            }
        }
    }

    // --- (iv) volume identity (exact) ---------------------------------------
    rep.volume_sum = total_abs_edge_det(X);
    rep.volume_expected = factorial(p);
    for (int c = 0; c < p; ++c) rep.volume_expected *= X.lattice[c];
    if (rep.volume_sum != rep.volume_expected)
        fail(rep.volume_identity, "sum |det V| = " + rep.volume_sum.get_str() + " expected " +
                                      rep.volume_expected.get_str());

    // --- (iv) sampled covering / interior disjointness ----------------------
    std::mt19937_64 rng(opt.seed);
    std::vector<std::int64_t> cmin(p, 0), cmax(p, 0);
    for (const auto& s : X.simplices)
        for (const auto& v : s.vertices)
            for (int c = 0; c < p; ++c) {
                cmin[c] = std::min(cmin[c], v[c]);
                cmax[c] = std::max(cmax[c], v[c]);
            }
    const long long DEN = 1LL << 40;
    for (int t = 0; t < opt.samples; ++t) {
        QVec z(p);
        for (int c = 0; c < p; ++c) {
            unsigned long long rr = rng() & (DEN - 1);
            if (rr == 0) rr = 1;
            z[c] = mpq_class((long)X.lattice[c]) * mpq_class((long)rr, (long)DEN);
        }
        std::vector<std::vector<long long>> cand(p);
        for (int c = 0; c < p; ++c) {
            long long span = (cmax[c] - cmin[c]) / X.lattice[c] + 1;
            for (long long sh = -span; sh <= span; ++sh) {
                mpq_class shifted = z[c] + mpq_class((long)(sh * X.lattice[c]));
                if (shifted >= (long)cmin[c] && shifted <= (long)cmax[c])
                    cand[c].push_back(sh * X.lattice[c]);
            }
        }
        int closed_hits = 0, interior_hits = 0;
        std::vector<long long> pick(p, 0);
        std::function<void(int)> enumerate = [&](int c) {
            if (c == p) {
                QVec zz(p);
                std::vector<double> zd(p); // dyadic samples are exact doubles
                for (int i = 0; i < p; ++i) {
                    zz[i] = z[i] + mpq_class((long)pick[i]);
                    zd[i] = zz[i].get_d();
                }
                for (size_t si = 0; si < ns; ++si) {
                    if (!fns[si]) continue;
                    bool in_box = true;
                    for (int i = 0; i < p && in_box; ++i)
                        if (zd[i] < (double)bb_lo[si][i] || zd[i] > (double)bb_hi[si][i])
                            in_box = false;
                    if (!in_box) continue;
                    bool inside = true, interior = true;
                    for (const auto& g : *fns[si]) {
                        mpq_class v = g.eval(zz);
                        if (v < 0) {
                            inside = false;
                            break;
                        }
                        if (v == 0) interior = false;
                    }
                    if (!inside) continue;
                    ++closed_hits;
                    if (interior) ++interior_hits;
                }
                return;
            }
            for (long long sh : cand[c]) {
                pick[c] = sh;
                enumerate(c + 1);
            }
        };
        enumerate(0);
        if (closed_hits < 1) fail(rep.covering, "sampled point not covered by any translate");
        if (interior_hits > 1)
            fail(rep.interior_disjoint, "sampled point covered by two simplex interiors");
        ++rep.samples_used;
    }

    // --- (v) spanning-vertex equivariance on boundary samples ---------------
    if (p > 0) {
        int want_pairs = std::max(10, opt.samples / 100);
        for (int t = 0; t < want_pairs; ++t) {
            const auto& s = X.simplices[rng() % ns];
            int fsz = 1 + (int)(rng() % (size_t)std::max(1, (int)s.vertices.size() - 1));
            std::vector<int> ids(s.vertices.size());
            for (size_t i = 0; i < ids.size(); ++i) ids[i] = (int)i;
            std::shuffle(ids.begin(), ids.end(), rng);
            ids.resize(fsz);
            QVec x(p, mpq_class(0));
            long wsum = 0;
            std::vector<long> w(fsz);
            for (int i = 0; i < fsz; ++i) {
                w[i] = 1 + (long)(rng() % 7);
                wsum += w[i];
            }
            for (int i = 0; i < fsz; ++i)
                for (int c = 0; c < p; ++c)
                    x[c] += mpq_class(w[i], wsum) * mpq_class((long)s.vertices[ids[i]][c]);
            std::vector<IVec> sp;
            try {
                sp = spanning_vertices(X, x);
            } catch (const PointOutsideComplex&) {
                continue;
            }
            for (const auto& lam : gens) {
                QVec x2(p);
                for (int c = 0; c < p; ++c) x2[c] = x[c] + mpq_class((long)lam[c]);
                std::vector<IVec> sp2;
                try {
                    sp2 = spanning_vertices(X, x2);
                } catch (const PointOutsideComplex&) {
                    continue;
                }
                std::set<IVec> expect;
                for (const auto& v : sp) expect.insert(vec_add(v, lam));
                std::set<IVec> got(sp2.begin(), sp2.end());
                if (expect != got)
                    fail(rep.spanning_equivariant,
                         "spanning vertices not equivariant under " + vec_str(lam));
                ++rep.boundary_pairs_checked;
            }
        }
    }

    // --- Omega_j range and sector bounds -------------------------------------
    if (opt.field && !opt.N.empty()) {
        const int r2 = (int)opt.N.size();
        long prec = std::max<long>(opt.ladder.start * 2, 128);
        for (size_t a = 0; a < ns; ++a) {
            const auto& s = X.simplices[a];
            for (int j = 0; j < r2; ++j) {
                std::vector<Interval> om;
                for (const auto& v : s.vertices) {
                    QVec kq(v.size());
                    for (size_t c = 0; c < v.size(); ++c) kq[c] = mpq_class((long)v[c]);
                    om.push_back(omega_j(*opt.field, opt.units, opt.N, j, kq, prec));
                }
                for (size_t i = 0; i < om.size(); ++i)
                    for (size_t l = 0; l < om.size(); ++l) {
                        Interval d = om[i] - om[l];
                        if (mpfr_cmp_si(d.lo(), 1) > 0)
                            fail(rep.omega_range,
                                 "Omega_" + std::to_string(j) + " spread certified > 1 on simplex " +
                                     std::to_string(a));
                    }
                if (opt.sectors && a < opt.sectors->entries.size() &&
                    j < (int)opt.sectors->entries[a].size()) {
                    const SectorEntry& se = opt.sectors->entries[a][j];
                    QVec vq(se.v.size());
                    for (size_t c = 0; c < se.v.size(); ++c) vq[c] = mpq_class((long)se.v[c]);
                    // the stage vertex is short enough that omega_j sees only
                    // the arg part; the recorded offset carries A(v)+ell-1
                    Interval alpha = omega_j(*opt.field, opt.units, opt.N, j, vq, prec) +
                                     Interval::from_long((long)se.offset, prec);
                    for (const auto& o : om) {
                        Interval d = o - alpha;
                        if (mpfr_cmp_si(d.hi(), 0) < 0 || mpfr_cmp_si(d.lo(), 1) > 0)
                            fail(rep.sector_bounds,
                                 "vertex Omega outside [alpha_j, alpha_j+1] on simplex " +
                                     std::to_string(a));
                    }
                }
            }
        }
    }

    return rep;
}

} // namespace sfd
