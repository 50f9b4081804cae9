#include "sfd/domain.hpp"

#include <algorithm>
#include <cmath>

#include "sfd/errors.hpp"

namespace sfd {

OrderedComplex SignedDomain::complex_view() const {
    OrderedComplex X;
    X.dim = field->degree() - 1;
    const int r = field->unit_rank();
    X.lattice.assign(X.dim, 1);
    for (int j = 0; j < field->r2(); ++j) X.lattice[r + j] = N[j];
    for (const auto& c : cones) X.simplices.push_back(c.simplex);
    return X;
}

SectorData SignedDomain::sector_view() const {
    SectorData sd;
    for (const auto& c : cones) sd.entries.push_back(c.sector);
    return sd;
}

std::size_t SignedDomain::nonzero_cone_count() const {
    std::size_t n = 0;
    for (const auto& c : cones)
        if (c.mu != 0) ++n;
    return n;
}

std::vector<FieldElement> cone_generators(const NumberField& field, const OrderedSimplex& s,
                                          const Twister& tw,
                                          const std::vector<FieldElement>& units) {
    const int r = (int)units.size();
    std::vector<FieldElement> gens;
    gens.reserve(s.vertices.size());
    for (const auto& v : s.vertices) {
        FieldElement w = tw.lookup(v);
        for (int j = 0; j < r; ++j) {
            if (v[j] == 0) continue;
            w = field.mul(w, field.pow(units[j], (long)v[j]));
        }
        gens.push_back(std::move(w));
    }
    return gens;
}

int regulator_sign(const NumberField& field, const std::vector<FieldElement>& units,
                   const PrecisionLadder& ladder) {
    const int m = field.r1() + field.r2();
    if ((int)units.size() != m - 1) throw Error("regulator_sign: need r1+r2-1 units");
    if (m == 1) return 1;
    return certify(ladder, [&](long p) -> std::optional<int> {
        IMat mx;
        mx.emplace_back();
        for (int j = 0; j < m; ++j) mx[0].push_back(Interval::from_long(1, p));
        // e_j-weighted logs differ from the plain rows by positive column
        // scalings, which leave the determinant sign unchanged
        for (const auto& u : units) mx.push_back(field.log_embedding(u, p));
        try {
            Interval d = interval_det(std::move(mx));
            if (d.is_positive()) return 1;
            if (d.is_negative()) return -1;
        } catch (const Indeterminate&) {
        }
        return std::nullopt;
    }, "sign of det R");
}

mpq_class generator_coord_det(const std::vector<FieldElement>& generators) {
    const size_t n = generators.size();
    QMat m(n, QVec(n));
    for (size_t i = 0; i < n; ++i) m[i] = generators[i].coords;
    return qmat_det(std::move(m));
}

int numeric_W_sign(const NumberField& field, const std::vector<FieldElement>& generators,
                   const PrecisionLadder& ladder) {
    return certify(ladder, [&](long p) -> std::optional<int> {
        IMat m;
        for (const auto& g : generators) m.push_back(field.iota_row(g, p));
        try {
            Interval d = interval_det(std::move(m));
            if (d.is_positive()) return 1;
            if (d.is_negative()) return -1;
        } catch (const Indeterminate&) {
        }
        return std::nullopt;
    }, "sign of det W");
}

int sign_mu(const NumberField& field, const std::vector<FieldElement>& units,
            const OrderedSimplex& simplex, const std::vector<FieldElement>& generators,
            const PrecisionLadder& ladder) {
    if (generator_coord_det(generators) == 0) return 0;
    mpz_class detV = simplex_edge_det(simplex.vertices);
    if (detV == 0) return 0;
    int sV = detV > 0 ? 1 : -1;
    int sW = numeric_W_sign(field, generators, ladder);
    int sR = regulator_sign(field, units, ladder);
    int parity = (field.r2() * (field.r2() - 1) / 2) % 2 == 0 ? 1 : -1;
    return parity * sR * sV * sW;
}

E1Solution solve_e1(const NumberField& field, const std::vector<FieldElement>& generators,
                    const PrecisionLadder& ladder) {
    if (field.r1() < 1) throw Error("solve_e1: field must have a real place");
    const size_t n = generators.size();
    return certify(ladder, [&](long p) -> std::optional<E1Solution> {
        // x = sum t_l w_l in iota coordinates: solve W^T t = e1
        IMat m(n, IVecI(n, Interval(p)));
        for (size_t l = 0; l < n; ++l) {
            auto row = field.iota_row(generators[l], p);
            for (size_t i = 0; i < n; ++i) m[i][l] = row[i];
        }
        IVecI rhs(n, Interval::from_long(0, p));
        rhs[0] = Interval::from_long(1, p);
        try {
            IVecI y = interval_solve(std::move(m), std::move(rhs));
            E1Solution sol;
            for (const auto& v : y) {
                if (v.is_positive())
                    sol.signs.push_back(1);
                else if (v.is_negative())
                    sol.signs.push_back(-1);
                else
                    return std::nullopt;
                sol.y.push_back(v.mid_double());
            }
            return sol;
        } catch (const Indeterminate&) {
            return std::nullopt;
        }
    }, "e1 coordinate signs");
}

MembershipEngine::MembershipEngine(const SignedDomain& dom, long prec)
    : dom_(dom), prec_(prec) {
    const size_t n = (size_t)dom.field->degree();
    for (const auto& cone : dom.cones) {
        cones_.push_back(&cone);
        LU lu;
        if (cone.mu != 0) {
            IMat a(n, IVecI(n, Interval(prec)));
            for (size_t l = 0; l < n; ++l) {
                auto row = dom.field->iota_row(cone.generators[l], prec);
                for (size_t i = 0; i < n; ++i) a[i][l] = row[i];
            }
            // in-place Doolittle with partial pivoting
            lu.perm.resize(n);
            for (size_t i = 0; i < n; ++i) lu.perm[i] = i;
            lu.lower.assign(n, IVecI(n, Interval::from_long(0, prec)));
            bool ok = true;
            for (size_t col = 0; col < n && ok; ++col) {
                size_t best = col;
                double mag = -1;
                for (size_t row = col; row < n; ++row) {
                    double m2 = std::abs(a[row][col].mid_double());
                    if (m2 > mag) {
                        mag = m2;
                        best = row;
                    }
                }
                std::swap(a[col], a[best]);
                std::swap(lu.lower[col], lu.lower[best]);
                std::swap(lu.perm[col], lu.perm[best]);
                if (a[col][col].contains_zero()) {
                    ok = false;
                    break;
                }
                for (size_t row = col + 1; row < n; ++row) {
                    Interval f = a[row][col] / a[col][col];
                    lu.lower[row][col] = f;
                    for (size_t kk = col; kk < n; ++kk) a[row][kk] = a[row][kk] - f * a[col][kk];
                }
            }
            if (ok) {
                lu.upper = std::move(a);
                lu.singular = false;
            }
        }
        lus_.push_back(std::move(lu));
    }
}

Membership MembershipEngine::contains(std::size_t cone_idx, const IVecI& x, double tol) const {
    const SignedCone& cone = *cones_[cone_idx];
    if (cone.mu == 0) throw SingularCone("membership test against a degenerate cone");
    const LU& lu = lus_[cone_idx];
    if (lu.singular) throw SingularCone("cone solver could not be factored");
    const size_t n = x.size();
    // forward substitution on the permuted rhs
    IVecI b(n, Interval(prec_));
    for (size_t i = 0; i < n; ++i) b[i] = x[lu.perm[i]];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j) b[i] = b[i] - lu.lower[i][j] * b[j];
    IVecI t(n, Interval(prec_));
    for (size_t i = n; i-- > 0;) {
        Interval s = b[i];
        for (size_t j = i + 1; j < n; ++j) s = s - lu.upper[i][j] * t[j];
        t[i] = s / lu.upper[i][i];
    }
    double scale = 1.0;
    for (const auto& ti : t) scale = std::max(scale, std::abs(ti.mid_double()));
    double tol_abs = tol * scale;
    bool ambiguous = false;
    for (size_t i = 0; i < n; ++i) {
        double lo = mpfr_get_d(t[i].lo(), MPFR_RNDD);
        double hi = mpfr_get_d(t[i].hi(), MPFR_RNDU);
        if (hi < -tol_abs) return Membership::No;
        if (!(lo > tol_abs)) ambiguous = true;
    }
    return ambiguous ? Membership::Ambiguous : Membership::Yes;
}

bool contains_exact(const NumberField& field, const SignedCone& cone, const FieldElement& x) {
    if (cone.mu == 0) throw SingularCone("membership test against a degenerate cone");
    const size_t n = cone.generators.size();
    if ((int)x.coords.size() != field.degree()) throw Error("contains_exact: wrong element size");
    if (cone.y_signs.size() != n) throw Error("contains_exact: missing face-closure signs");
    QMat m(n, QVec(n));
    for (size_t l = 0; l < n; ++l)
        for (size_t i = 0; i < n; ++i) m[i][l] = cone.generators[l].coords[i];
    QVec t = qmat_solve(std::move(m), x.coords);
    for (size_t l = 0; l < n; ++l) {
        if (t[l] < 0) return false;
        if (t[l] == 0 && cone.y_signs[l] < 0) return false; // open face
    }
    return true;
}

bool sector_check(const NumberField& field, const std::vector<FieldElement>& units,
                  const std::vector<long long>& N, const SignedCone& cone,
                  const PrecisionLadder& ladder) {
    const int r2 = field.r2();
    for (int j = 0; j < r2; ++j) {
        if (j >= (int)cone.sector.size()) throw Error("sector_check: missing sector data");
        const SectorEntry& se = cone.sector[j];
        bool ok = certify(ladder, [&](long p) -> std::optional<bool> {
            QVec vq(se.v.size());
            for (size_t c = 0; c < se.v.size(); ++c) vq[c] = mpq_class((long)se.v[c]);
            Interval alpha = omega_j(field, units, N, j, vq, p) +
                             Interval::from_long((long)se.offset, p);
            // direction angle psi = 2 pi (alpha + 1/2) / N_j
            Interval psi = (alpha + Interval::from_mpq(mpq_class(1, 2), p)) *
                           Interval::pi(p).mul_long(2) / Interval::from_long((long)N[j], p);
            Interval cpsi = psi.cos(), spsi = psi.sin();
            for (const auto& g : cone.generators) {
                CInterval z = field.embed_complex(g, j, p);
                Interval sep = z.re() * cpsi + z.im() * spsi; // Re(z e^(-i psi))
                if (sep.is_negative() || sep.is_exact_zero()) return false;
                if (!sep.is_positive()) return std::nullopt;
            }
            return true;
        }, "sector containment");
        if (!ok) return false;
    }
    return true;
}

SignedDomain build_signed_domain(std::shared_ptr<const NumberField> field,
                                 std::vector<FieldElement> units, std::vector<long long> N,
                                 Twister twister) {
    if (field->r1() < 1) throw InvalidFieldSpec("field must have a real place");
    if (!twister.complete()) throw Error("twister table incomplete");
    TwisterReport trep = validate_twister(*field, twister);
    if (!trep.all_ok) throw Error("twister table failed validation");

    SignedDomain dom;
    dom.field = field;
    dom.units = units;
    dom.N = N;
    dom.twister = std::move(twister);
    dom.precision_bits = field->precision_bits();

    DomainComplex dc = build_domain_complex(field, units, N);

    dom.det_R_sign = regulator_sign(*field, units, field->ladder());
    dom.basis_embedding_sign = field->basis_embedding_sign();
    int parity = (field->r2() * (field->r2() - 1) / 2) % 2 == 0 ? 1 : -1;
    int npar = (field->degree() - 1) % 2 == 0 ? 1 : -1;
    dom.degree_constant = npar * parity * dom.det_R_sign;

    for (size_t a = 0; a < dc.X.simplices.size(); ++a) {
        SignedCone cone;
        cone.alpha = a;
        cone.simplex = dc.X.simplices[a];
        cone.sector = dc.sectors.entries[a];
        cone.generators = cone_generators(*field, cone.simplex, dom.twister, units);

        mpq_class detC = generator_coord_det(cone.generators);
        if (detC == 0) {
            cone.mu = 0;
        } else {
            mpz_class detV = simplex_edge_det(cone.simplex.vertices);
            int sV = detV > 0 ? 1 : (detV < 0 ? -1 : 0);
            int sW = numeric_W_sign(*field, cone.generators, field->ladder());
            cone.mu = sV == 0 ? 0 : parity * dom.det_R_sign * sV * sW;
        }
        if (cone.mu != 0) {
            E1Solution sol = solve_e1(*field, cone.generators, field->ladder());
            cone.y_signs = sol.signs;
            for (int s : sol.signs) cone.closure.push_back(s > 0);
        }
        dom.cones.push_back(std::move(cone));
    }
    return dom;
}

} // namespace sfd
