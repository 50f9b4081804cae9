// Acceptance suite: end-to-end checks of the signed-fundamental-domain
// pipeline on the three stock fixtures, one line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>

#include "sfd/io.hpp"
#include "sfd/verify.hpp"

using namespace sfd;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture(const char* name) { return std::string(SFD_FIXTURE_DIR) + "/" + name; }

SignedDomain build_fixture(const char* name) {
    return build_from_spec(parse_field_spec(load_json_file(fixture(name))));
}

void report(int criterion, const char* what, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what
              << std::endl;
}

// counts unambiguous seeded samples whose signed count is exactly 1
struct CountRun {
    int ones = 0;
    int resampled = 0;
    int wrong = 0;
};

CountRun count_samples(const SignedDomain& dom, int want, std::uint64_t seed, long prec) {
    MembershipEngine eng(dom, prec);
    ConeLogBox box = cone_log_box(dom);
    CountRun run;
    std::uint64_t idx = 0;
    while (run.ones + run.wrong < want && idx < (std::uint64_t)want * 10) {
        IVecI x = sample_point(dom, seed, idx++, prec);
        int B = enumeration_bound(dom, x, prec, &box);
        auto c = signed_count(dom, eng, x, B, 1e-30, nullptr, &box);
        if (!c.has_value()) {
            ++run.resampled;
            continue;
        }
        if (*c == 1)
            ++run.ones;
        else
            ++run.wrong;
    }
    return run;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SFD_CLI_PATH) + " " + args + " >/dev/null 2>&1; echo $?";
    std::array<char, 256> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    while (fgets(buf.data(), (int)buf.size(), pipe)) out += buf.data();
    pclose(pipe);
    return {std::atoi(out.c_str()), out};
}

} // namespace

TEST_CASE("criterion 1: golden-ratio fixture, 1000 seeded points, < 5 s") {
    auto t0 = std::chrono::steady_clock::now();
    SignedDomain dom = build_fixture("sqrt5.json");
    bool ok = dom.cones.size() == 1 && dom.cones[0].mu == 1;
    CountRun run = count_samples(dom, 1000, 42, 128);
    ok = ok && run.ones == 1000 && run.wrong == 0;
    double dt = seconds_since(t0);
    ok = ok && dt < 5.0;
    report(1, "Q(sqrt5): 1 cone, mu=+1, 1000 signed counts of 1", ok);
    CHECK(dom.cones.size() == 1);
    CHECK(dom.cones[0].mu == 1);
    CHECK(run.ones == 1000);
    CHECK(run.wrong == 0);
    CHECK(dt < 5.0);
}

TEST_CASE("criterion 2: cubic fixture, 6 cones, sectors and y-signs, < 60 s") {
    auto t0 = std::chrono::steady_clock::now();
    SignedDomain dom = build_fixture("cbrt2.json");
    bool ok = dom.cones.size() == 6;
    bool sectors = true, ys = true;
    for (const auto& c : dom.cones) {
        try {
            if (!sector_check(*dom.field, dom.units, dom.N, c, dom.field->ladder()))
                sectors = false;
        } catch (const PrecisionExhausted&) {
            sectors = false;
        }
        if (c.mu == 0 || c.y_signs.size() != 3) ys = false;
        try {
            E1Solution sol = solve_e1(*dom.field, c.generators, dom.field->ladder());
            for (int s : sol.signs)
                if (s == 0) ys = false;
        } catch (const PrecisionExhausted&) {
            ys = false;
        }
    }
    CountRun run = count_samples(dom, 1000, 42, 128);
    double dt = seconds_since(t0);
    ok = ok && sectors && ys && run.ones == 1000 && run.wrong == 0 && dt < 60.0;
    report(2, "Q(cbrt2): 6 cones, signed counts, sectors, y certificates", ok);
    CHECK(dom.cones.size() == 6);
    CHECK(sectors);
    CHECK(ys);
    CHECK(run.ones == 1000);
    CHECK(run.wrong == 0);
    CHECK(dt < 60.0);
}

TEST_CASE("criterion 3: raise cardinality law") {
    PrecisionLadder lad{64, 4096};
    bool ok = true;
    // (1, 0, 1)
    OrderedComplex X0;
    X0.dim = 0;
    X0.simplices.push_back(OrderedSimplex{{IVec{}}, std::nullopt});
    ok = ok && raise(X0, LinearForm::zero(), 0, 1, lad).simplices.size() == 1;
    // (2, 2, 3)
    OrderedComplex X2 =
        raise(raise(X0, LinearForm::zero(), 0, 1, lad), LinearForm::zero(), 0, 1, lad);
    ok = ok &&
         raise(X2, LinearForm::from_doubles({0.45, 0.85}), 0, 3, lad).simplices.size() == 18;
    // (6, 2, 3): six triangles from a 3-periodic strip
    OrderedComplex six;
    six.dim = 2;
    six.lattice = {1, 3};
    for (long s = 0; s < 3; ++s) {
        six.simplices.push_back(OrderedSimplex{{IVec{1, s + 1}, IVec{1, s}, IVec{0, s}}, {}});
        six.simplices.push_back(
            OrderedSimplex{{IVec{1, s + 1}, IVec{0, s + 1}, IVec{0, s}}, {}});
    }
    ok = ok &&
         raise(six, LinearForm::from_doubles({0.3, 0.7}), 0, 3, lad).simplices.size() == 54;
    report(3, "|raise(X, omega, M1, M2)| = (M2-M1)(p+1)|X|", ok);
    CHECK(ok);
}

TEST_CASE("criterion 4: volume identity sum |det V| = (n-1)! prod N") {
    bool ok = true;
    SignedDomain d5 = build_fixture("sqrt5.json");
    ok = ok && total_abs_edge_det(d5.complex_view()) == 1;
    SignedDomain d3 = build_fixture("cbrt2.json");
    ok = ok && total_abs_edge_det(d3.complex_view()) == 6;
    SignedDomain d4 = build_fixture("quartic21.json");
    mpz_class got = total_abs_edge_det(d4.complex_view());
    ok = ok && got == 18;
    report(4, "volume identity on all fixtures (quartic expects 3!*3 = 18)", ok);
    CHECK(total_abs_edge_det(d5.complex_view()) == 1);
    CHECK(total_abs_edge_det(d3.complex_view()) == 6);
    CHECK(got == 18);
}

TEST_CASE("criterion 5: lambda-complex axioms at 10^4 samples on all fixtures") {
    bool all_ok = true;
    for (const char* name : {"sqrt5.json", "cbrt2.json", "quartic21.json"}) {
        SignedDomain dom = build_fixture(name);
        OrderedComplex X = dom.complex_view();
        SectorData sd = dom.sector_view();
        LambdaCheckOptions opt;
        opt.samples = 10000;
        opt.seed = 42;
        opt.field = dom.field;
        opt.units = dom.units;
        opt.N = dom.N;
        opt.sectors = &sd;
        opt.ladder = dom.field->ladder();
        LambdaReport rep = lambda_complex_check(X, opt);
        if (!rep.all_pass()) {
            all_ok = false;
            for (const auto& f : rep.failures) std::cout << "  [" << name << "] " << f << "\n";
        }
        CHECK(rep.all_pass());
    }
    report(5, "axioms (i)-(v) and Omega_j range, 10^4 samples, zero failures", all_ok);
}

TEST_CASE("criterion 6: exact/numeric det W coherence on every cone") {
    bool all_ok = true;
    for (const char* name : {"sqrt5.json", "cbrt2.json", "quartic21.json"}) {
        SignedDomain dom = build_fixture(name);
        for (const auto& c : dom.cones) {
            mpq_class detC = generator_coord_det(c.generators);
            if (detC == 0) continue;
            int exact_sign = (detC > 0 ? 1 : -1) * dom.basis_embedding_sign;
            int numeric = numeric_W_sign(*dom.field, c.generators, dom.field->ladder());
            if (numeric != exact_sign) all_ok = false;
            CHECK(numeric == exact_sign);
        }
    }
    report(6, "sign(det W) numeric == exact coordinate det x basis sign", all_ok);
}

TEST_CASE("criterion 7: invariance under relabelings and the unit action") {
    bool ok = true;
    std::mt19937_64 rng(42);
    for (const char* name : {"sqrt5.json", "cbrt2.json"}) {
        SignedDomain dom = build_fixture(name);
        int parity = (dom.field->r2() * (dom.field->r2() - 1) / 2) % 2 == 0 ? 1 : -1;
        for (const auto& c : dom.cones) {
            for (int t = 0; t < 100; ++t) {
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
                int mu2 = parity * dom.det_R_sign * (detV > 0 ? 1 : -1) * (detC > 0 ? 1 : -1) *
                          dom.basis_embedding_sign;
                if (mu2 != c.mu) ok = false;
            }
        }
        CHECK(ok);

        // signed_count(x) == signed_count(eps x) on 100 pairs
        MembershipEngine eng(dom, 128);
        const NumberField& k = *dom.field;
        const int r = k.unit_rank();
        int done = 0;
        std::uint64_t idx = 0;
        while (done < 100 && idx < 1000) {
            IVecI x = sample_point(dom, 4242, idx++, 128);
            std::vector<int> a(r);
            bool nonzero = false;
            for (int i = 0; i < r; ++i) {
                a[i] = (int)(rng() % 5) - 2;
                if (a[i] != 0) nonzero = true;
            }
            if (!nonzero) a[0] = 1;
            IVecI y = x;
            const int r1 = k.r1(), r2 = k.r2();
            for (int i = 0; i < r; ++i) {
                if (a[i] == 0) continue;
                FieldElement up = k.pow(dom.units[i], a[i]);
                for (int j = 0; j < r1; ++j) y[j] = y[j] * k.embed_real(up, j, 128);
                for (int j = 0; j < r2; ++j) {
                    CInterval z(y[r1 + 2 * j], y[r1 + 2 * j + 1]);
                    z = z * k.embed_complex(up, j, 128);
                    y[r1 + 2 * j] = z.re();
                    y[r1 + 2 * j + 1] = z.im();
                }
            }
            auto cx = signed_count(dom, eng, x, enumeration_bound(dom, x, 128), 1e-30);
            auto cy = signed_count(dom, eng, y, enumeration_bound(dom, y, 128), 1e-30);
            if (!cx.has_value() || !cy.has_value()) continue;
            if (*cx != *cy) ok = false;
            ++done;
        }
        CHECK(done == 100);
    }
    report(7, "mu relabeling invariance (100/cone) and E-invariance (100 pairs)", ok);
    CHECK(ok);
}

TEST_CASE("criterion 8: negative controls must fail with exit 1") {
    std::string dom_path = "/tmp/sfd_acceptance_cbrt2.json";
    RunResult rb = run_cli("build " + fixture("cbrt2.json") + " --out " + dom_path);
    REQUIRE(rb.exit_code == 0);
    json good = load_json_file(dom_path);

    json flipped = good;
    flipped["cones"][2]["mu"] = -flipped["cones"][2]["mu"].get<int>();
    write_text_file("/tmp/sfd_acceptance_flipped.json", flipped.dump());
    RunResult rf = run_cli("verify /tmp/sfd_acceptance_flipped.json --samples 100 "
                           "--lambda-samples 200 --seed 11");

    json shifted = good;
    shifted["cones"][0]["vertices"][0][0] = shifted["cones"][0]["vertices"][0][0].get<int>() + 1;
    write_text_file("/tmp/sfd_acceptance_shifted.json", shifted.dump());
    RunResult rs = run_cli("verify /tmp/sfd_acceptance_shifted.json --samples 40 "
                           "--lambda-samples 200 --seed 11");

    RunResult rgood =
        run_cli("verify " + dom_path + " --samples 60 --lambda-samples 200 --seed 11");

    bool ok = rf.exit_code == 1 && rs.exit_code == 1 && rgood.exit_code == 0;
    report(8, "flipped-mu and shifted-vertex domains are rejected (exit 1)", ok);
    CHECK(rf.exit_code == 1);
    CHECK(rs.exit_code == 1);
    CHECK(rgood.exit_code == 0);
}
