#include "sfd/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "sfd/errors.hpp"

namespace sfd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// midpoint per-place values of x (r1 reals, then complex pairs)
struct PlaceView {
    std::vector<double> real_vals;
    std::vector<std::pair<double, double>> cplx_vals;
};

PlaceView place_view(const SignedDomain& dom, const IVecI& x) {
    PlaceView pv;
    const int r1 = dom.field->r1(), r2 = dom.field->r2();
    for (int j = 0; j < r1; ++j) pv.real_vals.push_back(x[j].mid_double());
    for (int j = 0; j < r2; ++j)
        pv.cplx_vals.emplace_back(x[r1 + 2 * j].mid_double(), x[r1 + 2 * j + 1].mid_double());
    return pv;
}

double norm_of(const PlaceView& pv) {
    double n = 1;
    for (double v : pv.real_vals) n *= std::abs(v);
    for (auto& [re, im] : pv.cplx_vals) n *= re * re + im * im;
    return n;
}

} // namespace

ConeLogBox cone_log_box(const SignedDomain& dom) {
    const NumberField& k = *dom.field;
    const int r1 = k.r1(), r2 = k.r2();
    const int m = r1 + r2;
    const int n = k.degree();
    ConeLogBox box;
    box.lo.assign(m, 1e300);
    box.hi.assign(m, -1e300);
    box.cone_lo.resize(dom.cones.size());
    box.cone_hi.resize(dom.cones.size());
    for (size_t ci = 0; ci < dom.cones.size(); ++ci) {
        const auto& cone = dom.cones[ci];
        if (cone.mu == 0) continue;
        std::vector<double> lo(m, 1e300), hi(m, -1e300);
        std::vector<double> scales;
        for (const auto& g : cone.generators)
            scales.push_back(std::pow(std::abs(k.norm_exact(g).get_d()), -1.0 / n));
        for (int j = 0; j < r1; ++j)
            for (size_t l = 0; l < cone.generators.size(); ++l) {
                double v = k.embed_real(cone.generators[l], j, 64).mid_double() * scales[l];
                lo[j] = std::min(lo[j], v);
                hi[j] = std::max(hi[j], v);
            }
        for (int j = 0; j < r2; ++j) {
            if ((int)cone.sector.size() <= j) return ConeLogBox{};
            const SectorEntry& se = cone.sector[j];
            QVec vq(se.v.size());
            for (size_t c = 0; c < se.v.size(); ++c) vq[c] = mpq_class((long)se.v[c]);
            double alpha =
                omega_j(k, dom.units, dom.N, j, vq, 64).mid_double() + (double)se.offset;
            double psi = 2 * M_PI * (alpha + 0.5) / (double)dom.N[j];
            for (size_t l = 0; l < cone.generators.size(); ++l) {
                CInterval z = k.embed_complex(cone.generators[l], j, 64);
                double re = z.re().mid_double() * scales[l];
                double im = z.im().mid_double() * scales[l];
                lo[r1 + j] = std::min(lo[r1 + j], re * std::cos(psi) + im * std::sin(psi));
                hi[r1 + j] = std::max(hi[r1 + j], std::hypot(re, im));
            }
        }
        double mN = 1, MN = 1;
        for (int j = 0; j < m; ++j) {
            int e = j < r1 ? 1 : 2;
            if (lo[j] <= 0) return ConeLogBox{}; // separation failed; no pruning
            mN *= std::pow(lo[j], e);
            MN *= std::pow(hi[j], e);
        }
        box.cone_lo[ci].resize(m);
        box.cone_hi[ci].resize(m);
        for (int j = 0; j < m; ++j) {
            int e = j < r1 ? 1 : 2;
            double blo = e * (std::log(lo[j]) - std::log(MN) / n);
            double bhi = e * (std::log(hi[j]) - std::log(mN) / n);
            box.cone_lo[ci][j] = blo;
            box.cone_hi[ci][j] = bhi;
            box.lo[j] = std::min(box.lo[j], blo);
            box.hi[j] = std::max(box.hi[j], bhi);
        }
    }
    box.usable = true;
    return box;
}

namespace {

// tiny dense double inverse
std::vector<std::vector<double>> dinverse(std::vector<std::vector<double>> m) {
    const size_t n = m.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        double d = m[c][c];
        for (size_t k = 0; k < n; ++k) {
            m[c][k] /= d;
            inv[c][k] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = m[r][c];
            if (f == 0) continue;
            for (size_t k = 0; k < n; ++k) {
                m[r][k] -= f * m[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

} // namespace

int enumeration_bound(const SignedDomain& dom, const IVecI& x, long prec,
                      const ConeLogBox* box_in) {
    const NumberField& k = *dom.field;
    const int r1 = k.r1(), r2 = k.r2();
    const int r = r1 + r2 - 1;
    const int m = r1 + r2;
    const int n = k.degree();
    if (r == 0) return 0;

    PlaceView xv = place_view(dom, x);
    double s = std::pow(norm_of(xv), -1.0 / n);
    // L(x-normalized)
    std::vector<double> Lx(m);
    for (int j = 0; j < r1; ++j) Lx[j] = std::log(std::abs(xv.real_vals[j]) * s);
    for (int j = 0; j < r2; ++j) {
        auto& [re, im] = xv.cplx_vals[j];
        Lx[r1 + j] = std::log((re * re + im * im) * s * s); // 2 log|.|
    }

    ConeLogBox local;
    if (!box_in) {
        local = cone_log_box(dom);
        box_in = &local;
    }
    const ConeLogBox& box = *box_in;
    if (!box.usable) throw Error("enumeration bound unavailable: cone hulls not separated");
    bool any = false;
    for (const auto& cone : dom.cones)
        if (cone.mu != 0) any = true;
    if (!any) return 0;
    const std::vector<double>& lo_box = box.lo;
    const std::vector<double>& hi_box = box.hi;

    // shift by -L(x) and invert the unit-log matrix bordered with e_j
    std::vector<std::vector<double>> M(m, std::vector<double>(m));
    for (int i = 0; i < r; ++i) {
        auto lv = k.log_embedding(dom.units[i], std::max<long>(prec, 64));
        for (int j = 0; j < m; ++j) M[j][i] = lv[j].mid_double();
    }
    for (int j = 0; j < m; ++j) M[j][r] = j < r1 ? 1.0 : 2.0;
    auto inv = dinverse(std::move(M));
    double worst = 0;
    for (int i = 0; i < r; ++i) {
        double b = 0;
        for (int j = 0; j < m; ++j) {
            double mag = std::max(std::abs(lo_box[j] - Lx[j]), std::abs(hi_box[j] - Lx[j]));
            b += std::abs(inv[i][j]) * mag;
        }
        worst = std::max(worst, b);
    }
    if (!(worst < 1e6)) throw Error("enumeration bound diverged");
    return (int)std::ceil(worst) + 2;
}

std::optional<long> signed_count(const SignedDomain& dom, const MembershipEngine& eng,
                                 const IVecI& x, int B, double tol,
                                 std::vector<int>* per_cone_hits, const ConeLogBox* box_in) {
    const NumberField& k = *dom.field;
    const int r1 = k.r1(), r2 = k.r2();
    const int r = k.unit_rank();
    const long prec = eng.prec();
    const int Bx = B + 2;

    // power tables of unit embeddings over [-Bx, Bx]
    struct Pows {
        std::vector<Interval> real_pows;   // per real place, flattened
        std::vector<CInterval> cplx_pows;  // per complex place, flattened
    };
    const int W = 2 * Bx + 1;
    std::vector<Pows> table(r);
    for (int i = 0; i < r; ++i) {
        FieldElement u = dom.units[i];
        FieldElement ui = k.inv(u);
        table[i].real_pows.assign((size_t)W * r1, Interval::from_long(1, prec));
        table[i].cplx_pows.assign(
            (size_t)W * r2, CInterval(Interval::from_long(1, prec), Interval::from_long(0, prec)));
        for (int j = 0; j < r1; ++j) {
            Interval uu = k.embed_real(u, j, prec);
            Interval uinv = k.embed_real(ui, j, prec);
            for (int e = 1; e <= Bx; ++e) {
                table[i].real_pows[(size_t)(Bx + e) * r1 + j] =
                    table[i].real_pows[(size_t)(Bx + e - 1) * r1 + j] * uu;
                table[i].real_pows[(size_t)(Bx - e) * r1 + j] =
                    table[i].real_pows[(size_t)(Bx - e + 1) * r1 + j] * uinv;
            }
        }
        for (int j = 0; j < r2; ++j) {
            CInterval uu = k.embed_complex(u, j, prec);
            CInterval uinv = k.embed_complex(ui, j, prec);
            for (int e = 1; e <= Bx; ++e) {
                table[i].cplx_pows[(size_t)(Bx + e) * r2 + j] =
                    table[i].cplx_pows[(size_t)(Bx + e - 1) * r2 + j] * uu;
                table[i].cplx_pows[(size_t)(Bx - e) * r2 + j] =
                    table[i].cplx_pows[(size_t)(Bx - e + 1) * r2 + j] * uinv;
            }
        }
    }

    // Certified prefilter: a point whose normalized log vector provably
    // leaves the union of cone log-boxes by a wide margin cannot be a
    // member, so the membership solves can be skipped.
    const int m_places = r1 + r2;
    const int n_deg = k.degree();
    ConeLogBox local;
    if (!box_in) {
        local = cone_log_box(dom);
        box_in = &local;
    }
    const ConeLogBox& box = *box_in;
    std::vector<std::vector<Interval>> Lu;
    std::vector<Interval> Lx;
    bool prune_ok = box.usable;
    if (prune_ok) {
        for (int i = 0; i < r; ++i) Lu.push_back(k.log_embedding(dom.units[i], 64));
        try {
            for (int j = 0; j < r1; ++j) Lx.push_back(x[j].abs().log());
            for (int j = 0; j < r2; ++j)
                Lx.push_back((x[r1 + 2 * j].square() + x[r1 + 2 * j + 1].square()).log());
        } catch (const Indeterminate&) {
            prune_ok = false; // a coordinate enclosure touches zero
        }
    }
    const double prune_margin = 0.5;
    // normalized log vector of eps(a) x, or nullopt when the point provably
    // misses the union of all cone boxes
    auto normalized_logs = [&](const std::vector<int>& a) -> std::optional<std::vector<Interval>> {
        std::vector<Interval> out;
        if (!prune_ok) return out; // empty: no per-cone filtering available
        std::vector<Interval> La(m_places, Interval(64));
        Interval s = Interval::from_long(0, 64);
        for (int j = 0; j < m_places; ++j) {
            Interval v = Lx[j];
            for (int i = 0; i < r; ++i) v = v + Lu[i][j].mul_long(a[i]);
            s = s + v;
            La[j] = v;
        }
        out.reserve(m_places);
        for (int j = 0; j < m_places; ++j) {
            int e = j < r1 ? 1 : 2;
            Interval norm = La[j] - s.mul_long(e) / Interval::from_long(n_deg, 64);
            if (mpfr_cmp_d(norm.lo(), box.hi[j] + prune_margin) > 0) return std::nullopt;
            if (mpfr_cmp_d(norm.hi(), box.lo[j] - prune_margin) < 0) return std::nullopt;
            out.push_back(std::move(norm));
        }
        return out;
    };
    auto outside_cone_box = [&](const std::vector<Interval>& nlogs, size_t ci) {
        if (nlogs.empty() || box.cone_lo[ci].empty()) return false;
        for (int j = 0; j < m_places; ++j) {
            if (mpfr_cmp_d(nlogs[j].lo(), box.cone_hi[ci][j] + prune_margin) > 0) return true;
            if (mpfr_cmp_d(nlogs[j].hi(), box.cone_lo[ci][j] - prune_margin) < 0) return true;
        }
        return false;
    };

    long count_B = 0, count_Bx = 0;
    std::vector<int> hits(dom.cones.size(), 0);
    std::vector<int> a(r, -Bx);
    bool done = r == 0;
    bool first = true;
    while (true) {
        if (!first && r > 0) {
            int i = r - 1;
            while (i >= 0 && ++a[i] > Bx) a[i--] = -Bx;
            if (i < 0) break;
        }
        if (done && !first) break;
        first = false;
        auto nlogs = normalized_logs(a);
        if (!nlogs.has_value()) {
            if (r == 0) break;
            continue;
        }
        bool inside_B = true;
        for (int i = 0; i < r; ++i)
            if (std::abs(a[i]) > B) inside_B = false;
        // eps(a) x per place
        IVecI y(x.size(), Interval(prec));
        for (int j = 0; j < r1; ++j) {
            Interval v = x[j];
            for (int i = 0; i < r; ++i)
                v = v * table[i].real_pows[(size_t)(Bx + a[i]) * r1 + j];
            y[j] = v;
        }
        for (int j = 0; j < r2; ++j) {
            CInterval v(x[r1 + 2 * j], x[r1 + 2 * j + 1]);
            for (int i = 0; i < r; ++i)
                v = v * table[i].cplx_pows[(size_t)(Bx + a[i]) * r2 + j];
            y[r1 + 2 * j] = v.re();
            y[r1 + 2 * j + 1] = v.im();
        }
        for (size_t c = 0; c < dom.cones.size(); ++c) {
            if (dom.cones[c].mu == 0) continue;
            if (outside_cone_box(*nlogs, c)) continue;
            Membership mb = eng.contains(c, y, tol);
            if (mb == Membership::Ambiguous) return std::nullopt;
            if (mb == Membership::Yes) {
                count_Bx += dom.cones[c].mu;
                if (inside_B) {
                    count_B += dom.cones[c].mu;
                    ++hits[c];
                }
            }
        }
        if (r == 0) break;
    }
    if (count_B != count_Bx)
        throw UnstableBound("signed count differs between B and B+2");
    if (per_cone_hits) *per_cone_hits = hits;
    return count_B;
}

IVecI sample_point(const SignedDomain& dom, std::uint64_t seed, std::uint64_t index, long prec) {
    std::mt19937_64 rng(splitmix64(seed ^ (0x5851f42d4c957f2dULL * (index + 1))));
    std::uniform_real_distribution<double> mag(-2.0, 2.0), ang(-M_PI, M_PI);
    const int r1 = dom.field->r1(), r2 = dom.field->r2();
    IVecI x;
    for (int j = 0; j < r1; ++j)
        x.push_back(Interval::from_double(std::exp(mag(rng)), prec));
    for (int j = 0; j < r2; ++j) {
        double rho = std::exp(mag(rng));
        double th = ang(rng);
        x.push_back(Interval::from_double(rho * std::cos(th), prec));
        x.push_back(Interval::from_double(rho * std::sin(th), prec));
    }
    return x;
}

VerifyReport run_property_suite(const SignedDomain& dom, const VerifyOptions& opt) {
    VerifyReport rep;
    rep.samples_requested = opt.samples;
    rep.seed = opt.seed;
    const NumberField& k = *dom.field;
    const long prec = opt.prec > 0 ? opt.prec : std::max<long>(128, dom.precision_bits);
    rep.precision_bits = prec;
    rep.per_cone_hits.assign(dom.cones.size(), 0);
    rep.max_orbit_per_cone.assign(dom.cones.size(), 0);
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (rep.failures.size() < 100) rep.failures.push_back(msg);
    };

    for (const auto& c : dom.cones)
        if (c.mu == 0) ++rep.mu_zero_cones;

    // lambda-complex suite
    if (opt.run_lambda) {
        OrderedComplex X = dom.complex_view();
        SectorData sd = dom.sector_view();
        LambdaCheckOptions lopt;
        lopt.samples = opt.lambda_samples;
        lopt.seed = opt.seed;
        lopt.field = dom.field;
        lopt.units = dom.units;
        lopt.N = dom.N;
        lopt.sectors = &sd;
        lopt.ladder = k.ladder();
        rep.lambda = lambda_complex_check(X, lopt);
        if (!rep.lambda.all_pass()) {
            std::string msg = "lambda-complex check failed";
            if (!rep.lambda.failures.empty()) msg += ": " + rep.lambda.failures[0];
            fail(rep.lambda_pass, msg);
        }
    }

    // per-cone sector containment
    for (const auto& c : dom.cones) {
        if (dom.field->r2() == 0) break;
        try {
            if (!sector_check(k, dom.units, dom.N, c, k.ladder()))
                fail(rep.sectors_pass, "sector check failed on cone " + std::to_string(c.alpha));
        } catch (const PrecisionExhausted&) {
            fail(rep.sectors_pass, "sector check undecided on cone " + std::to_string(c.alpha));
        }
    }

    // y-sign nonvanishing and closure consistency
    for (const auto& c : dom.cones) {
        if (c.mu == 0) continue;
        try {
            E1Solution sol = solve_e1(k, c.generators, k.ladder());
            if (sol.signs != c.y_signs)
                fail(rep.y_nonzero_pass, "y signs changed on cone " + std::to_string(c.alpha));
            for (size_t l = 0; l < sol.signs.size(); ++l)
                if ((sol.signs[l] > 0) != c.closure[l])
                    fail(rep.y_nonzero_pass,
                         "closure flags inconsistent on cone " + std::to_string(c.alpha));
        } catch (const PrecisionExhausted&) {
            fail(rep.y_nonzero_pass, "y sign undecided on cone " + std::to_string(c.alpha));
        }
    }

    // mu invariance under vertex relabelings (exact determinant route)
    {
        std::mt19937_64 rng(splitmix64(opt.seed ^ 0xABCDEF));
        int parity = (k.r2() * (k.r2() - 1) / 2) % 2 == 0 ? 1 : -1;
        for (const auto& c : dom.cones) {
            for (int t = 0; t < opt.relabelings; ++t) {
                std::vector<size_t> perm(c.generators.size());
                for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
                std::shuffle(perm.begin(), perm.end(), rng);
                std::vector<IVec> verts;
                std::vector<FieldElement> gens;
                for (size_t i : perm) {
                    verts.push_back(c.simplex.vertices[i]);
                    gens.push_back(c.generators[i]);
                }
                mpz_class detV = simplex_edge_det(verts);
                mpq_class detC = generator_coord_det(gens);
                int mu2 = 0;
                if (detV != 0 && detC != 0)
                    mu2 = parity * dom.det_R_sign * (detV > 0 ? 1 : -1) *
                          (detC > 0 ? 1 : -1) * dom.basis_embedding_sign;
                if (mu2 != c.mu) {
                    fail(rep.mu_relabeling_pass,
                         "mu not invariant under relabeling on cone " + std::to_string(c.alpha));
                    break;
                }
            }
        }
    }

    // exact/numeric coherence of det W signs
    for (const auto& c : dom.cones) {
        mpq_class detC = generator_coord_det(c.generators);
        if (detC == 0) continue;
        int exact_sign = (detC > 0 ? 1 : -1) * dom.basis_embedding_sign;
        try {
            int numeric = numeric_W_sign(k, c.generators, k.ladder());
            if (numeric != exact_sign)
                fail(rep.det_coherence_pass,
                     "det W sign mismatch on cone " + std::to_string(c.alpha));
        } catch (const PrecisionExhausted&) {
            fail(rep.det_coherence_pass,
                 "det W sign undecided on cone " + std::to_string(c.alpha));
        }
    }

    // Theorem-1 sampling
    MembershipEngine eng(dom, prec);
    const ConeLogBox shared_box = cone_log_box(dom);
    struct SampleResult {
        std::optional<long> count;
        std::vector<int> hits;
        int bound = 0;
        bool unstable = false;
        std::string error;
    };
    auto process = [&](std::uint64_t index) {
        SampleResult res;
        try {
            IVecI x = sample_point(dom, opt.seed, index, prec);
            int B = opt.bound >= 0 ? opt.bound : enumeration_bound(dom, x, prec, &shared_box);
            res.bound = B;
            res.count = signed_count(dom, eng, x, B, opt.tol, &res.hits, &shared_box);
        } catch (const UnstableBound&) {
            res.unstable = true;
        } catch (const Error& e) {
            res.unstable = true;
            res.error = e.what();
        }
        return res;
    };
    const int max_draws = opt.samples * 10;
    int threads = opt.threads > 0 ? opt.threads
                                  : (int)std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t next_index = 0;
    while (rep.accepted < opt.samples && (int)next_index < max_draws) {
        int want = opt.samples - rep.accepted;
        int batch = std::min(want + 8, max_draws - (int)next_index);
        if (batch <= 0) break;
        std::vector<SampleResult> results((size_t)batch);
        if (threads <= 1 || batch < 4) {
            for (int i = 0; i < batch; ++i) results[i] = process(next_index + i);
        } else {
            std::atomic<int> cursor{0};
            std::vector<std::thread> pool;
            for (int w = 0; w < std::min(threads, batch); ++w)
                pool.emplace_back([&]() {
                    for (int i = cursor.fetch_add(1); i < batch; i = cursor.fetch_add(1))
                        results[i] = process(next_index + i);
                });
            for (auto& th : pool) th.join();
        }
        for (int i = 0; i < batch && rep.accepted < opt.samples; ++i) {
            const SampleResult& res = results[i];
            if (res.unstable) {
                fail(rep.stability_pass, res.error.empty()
                                             ? "enumeration bound unstable on a sample"
                                             : "sample failed: " + res.error);
                ++rep.accepted;
                continue;
            }
            if (!res.count.has_value()) {
                ++rep.resampled;
                continue;
            }
            ++rep.accepted;
            rep.per_sample_counts.push_back(*res.count);
            rep.bound_used_max = std::max(rep.bound_used_max, res.bound);
            if (*res.count != 1)
                fail(rep.counts_all_one, "signed count " + std::to_string(*res.count) +
                                             " != 1 on sample " + std::to_string(next_index + i));
            for (size_t c = 0; c < res.hits.size(); ++c) {
                rep.per_cone_hits[c] += res.hits[c];
                rep.max_orbit_per_cone[c] = std::max(rep.max_orbit_per_cone[c], res.hits[c]);
            }
        }
        next_index += batch;
    }
    if (rep.accepted < opt.samples)
        fail(rep.counts_all_one, "could not accept enough unambiguous samples");

    // E-invariance: signed_count(x) == signed_count(eps x)
    {
        std::mt19937_64 rng(splitmix64(opt.seed ^ 0x1234567ULL));
        const int r = k.unit_rank();
        int done = 0;
        std::uint64_t idx = 1u << 20;
        int attempts = 0;
        while (done < opt.invariance_pairs && attempts < opt.invariance_pairs * 10) {
            ++attempts;
            IVecI x = sample_point(dom, opt.seed ^ 0xE1E1, idx++, prec);
            std::vector<int> a(r);
            for (int i = 0; i < r; ++i) a[i] = (int)(rng() % 5) - 2;
            // eps(a) x via exact unit powers embedded per place
            IVecI y = x;
            const int r1 = k.r1(), r2 = k.r2();
            for (int i = 0; i < r; ++i) {
                if (a[i] == 0) continue;
                FieldElement up = k.pow(dom.units[i], a[i]);
                for (int j = 0; j < r1; ++j) y[j] = y[j] * k.embed_real(up, j, prec);
                for (int j = 0; j < r2; ++j) {
                    CInterval z(y[r1 + 2 * j], y[r1 + 2 * j + 1]);
                    z = z * k.embed_complex(up, j, prec);
                    y[r1 + 2 * j] = z.re();
                    y[r1 + 2 * j + 1] = z.im();
                }
            }
            try {
                int Bx = opt.bound >= 0 ? opt.bound
                                        : enumeration_bound(dom, x, prec, &shared_box);
                int By = opt.bound >= 0 ? opt.bound
                                        : enumeration_bound(dom, y, prec, &shared_box);
                auto cx = signed_count(dom, eng, x, Bx, opt.tol, nullptr, &shared_box);
                auto cy = signed_count(dom, eng, y, By, opt.tol, nullptr, &shared_box);
                if (!cx.has_value() || !cy.has_value()) continue;
                if (*cx != *cy)
                    fail(rep.e_invariance_pass, "signed count not E-invariant");
                ++done;
            } catch (const UnstableBound&) {
                fail(rep.stability_pass, "enumeration bound unstable on an invariance pair");
                ++done;
            }
        }
        if (done < opt.invariance_pairs)
            fail(rep.e_invariance_pass, "could not complete E-invariance pairs");
    }

    return rep;
}

} // namespace sfd
