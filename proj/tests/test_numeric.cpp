#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sfd/interval.hpp"
#include "sfd/poly.hpp"
#include "sfd/rational.hpp"
#include "sfd/roots.hpp"

using namespace sfd;

TEST_CASE("interval arithmetic encloses exact rational results") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 20);
    for (int t = 0; t < 500; ++t) {
        mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
        a.canonicalize();
        b.canonicalize();
        Interval ia = Interval::from_mpq(a, 64), ib = Interval::from_mpq(b, 64);
        auto check = [&](const Interval& iv, const mpq_class& exact) {
            Interval ex = Interval::from_mpq(exact, 256);
            CHECK(mpfr_cmp(iv.lo(), ex.hi()) <= 0);
            CHECK(mpfr_cmp(iv.hi(), ex.lo()) >= 0);
        };
        check(ia + ib, a + b);
        check(ia - ib, a - b);
        check(ia * ib, a * b);
        if (b != 0) check(ia / ib, a / b);
        check(ia.square(), a * a);
    }
}

TEST_CASE("interval log/exp/atan are enclosures") {
    Interval two = Interval::from_long(2, 128);
    Interval l = two.log();
    CHECK(l.lo() != nullptr);
    CHECK(std::abs(l.mid_double() - std::log(2.0)) < 1e-15);
    CHECK(l.wid_double() < 1e-30);
    Interval e = Interval::from_long(1, 128).exp();
    CHECK(std::abs(e.mid_double() - std::exp(1.0)) < 1e-14);
    Interval at = Interval::from_long(1, 128).atan();
    CHECK(std::abs(at.mid_double() - std::atan(1.0)) < 1e-15);
}

TEST_CASE("interval sign and ceil certification") {
    Interval pos = Interval::from_mpq(mpq_class(1, 1000000), 64);
    CHECK(pos.sign_certified() == 1);
    Interval z = Interval::from_long(0, 64);
    CHECK(z.sign_certified() == 0);
    Interval q = Interval::from_mpq(mpq_class(23, 10), 128);
    auto c = q.ceil_certified();
    REQUIRE(c.has_value());
    CHECK(*c == 3);
    Interval i5 = Interval::from_long(5, 64);
    auto c5 = i5.ceil_certified();
    REQUIRE(c5.has_value());
    CHECK(*c5 == 5);
    // straddling an integer: not certifiable
    Interval wide = Interval::from_endpoints(mpq_class(19, 10), mpq_class(21, 10), 64);
    CHECK(!wide.ceil_certified().has_value());
}

TEST_CASE("complex interval arg stays within corners and rejects the cut") {
    CInterval z(Interval::from_double(1.0, 128), Interval::from_double(1.0, 128));
    Interval a = z.arg();
    CHECK(std::abs(a.mid_double() - M_PI / 4) < 1e-15);
    CInterval neg(Interval::from_double(-1.0, 128), Interval::from_endpoints(mpq_class(-1, 100), mpq_class(1, 100), 128));
    CHECK_THROWS_AS(neg.arg(), Indeterminate);
}

TEST_CASE("interval linear solve encloses rational solution") {
    // [[2,1],[1,3]] x = [5,10] -> x = (1, 3)
    IMat m{{Interval::from_long(2, 128), Interval::from_long(1, 128)},
           {Interval::from_long(1, 128), Interval::from_long(3, 128)}};
    IVecI b{Interval::from_long(5, 128), Interval::from_long(10, 128)};
    IVecI x = interval_solve(m, b);
    CHECK(std::abs(x[0].mid_double() - 1.0) < 1e-30);
    CHECK(std::abs(x[1].mid_double() - 3.0) < 1e-30);
    IMat s{{Interval::from_long(1, 64), Interval::from_long(2, 64)},
           {Interval::from_long(2, 64), Interval::from_long(4, 64)}};
    CHECK_THROWS_AS(interval_det(s).sign_certified(), Indeterminate);
}

TEST_CASE("rational matrix determinant and solve") {
    QMat m{{mpq_class(2), mpq_class(1)}, {mpq_class(1), mpq_class(3)}};
    CHECK(qmat_det(m) == 5);
    QVec x = qmat_solve(m, QVec{mpq_class(5), mpq_class(10)});
    CHECK(x[0] == 1);
    CHECK(x[1] == 3);
    QMat inv = qmat_inverse(m);
    CHECK(inv[0][0] == mpq_class(3, 5));
    CHECK(inv[1][0] == mpq_class(-1, 5));
}

TEST_CASE("simplex edge determinant") {
    std::vector<IVec> tri{{0, 0}, {1, 0}, {0, 1}};
    CHECK(simplex_edge_det(tri) == 1);
    std::vector<IVec> flipped{{0, 0}, {0, 1}, {1, 0}};
    CHECK(simplex_edge_det(flipped) == -1);
    std::vector<IVec> pt{{}};
    CHECK(simplex_edge_det(pt) == 1);
}

TEST_CASE("bounded-denominator rounding picks best approximation") {
    // pi ~ 355/113 is optimal below denominator 113
    mpq_class pi_approx("3126535/995207");
    mpq_class r = round_to_denominator(pi_approx, 120);
    CHECK(r == mpq_class(355, 113));
    mpq_class half(1, 2);
    CHECK(round_to_denominator(half, 10) == half);
    // property: result denominator respects the bound and is at least as
    // close as the floor/ceil integers
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        mpq_class x((long)(rng() % 100000) - 50000, (long)(rng() % 9999) + 1);
        x.canonicalize();
        mpz_class bound((long)(rng() % 50) + 1);
        mpq_class y = round_to_denominator(x, bound);
        CHECK(y.get_den() <= bound);
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
        CHECK(abs(x - y) <= abs(x - mpq_class(fl)));
        CHECK(abs(x - y) <= abs(x - mpq_class(fl + 1)));
    }
}

TEST_CASE("rational parsing round trip") {
    CHECK(parse_rational("3/4") == mpq_class(3, 4));
    CHECK(parse_rational("-7") == -7);
    CHECK(rational_str(mpq_class(-2, 6)) == "-1/3");
    CHECK_THROWS_AS(parse_rational("1.5"), SchemaError);
    CHECK_THROWS_AS(parse_rational(""), SchemaError);
}

TEST_CASE("sturm counts and root isolation on known polynomials") {
    // x^2 - x - 1: two real roots
    CHECK(count_real_roots(ZPoly{-1, -1, 1}) == 2);
    // x^3 - 2: one real root
    CHECK(count_real_roots(ZPoly{-2, 0, 0, 1}) == 1);
    // x^4 + 1: none
    CHECK(count_real_roots(ZPoly{1, 0, 0, 0, 1}) == 0);
    // x^4 - x^3 - 1: two
    CHECK(count_real_roots(ZPoly{-1, 0, 0, -1, 1}) == 2);
}

TEST_CASE("find_roots certifies enclosures") {
    PrecisionLadder lad{64, 4096};

    SUBCASE("golden ratio polynomial") {
        RootSet rs = find_roots(ZPoly{-1, -1, 1}, 128, lad);
        REQUIRE(rs.real_roots.size() == 2);
        CHECK(rs.complex_roots.empty());
        double phi = (1 + std::sqrt(5.0)) / 2;
        CHECK(std::abs(rs.real_roots[1].to_interval(128).mid_double() - phi) < 1e-30);
        CHECK(rs.real_roots[0].lo < rs.real_roots[1].lo);
    }

    SUBCASE("x^3 - 2") {
        RootSet rs = find_roots(ZPoly{-2, 0, 0, 1}, 128, lad);
        REQUIRE(rs.real_roots.size() == 1);
        REQUIRE(rs.complex_roots.size() == 1);
        CHECK(std::abs(rs.real_roots[0].to_interval(128).mid_double() - std::cbrt(2.0)) < 1e-30);
        CHECK(std::abs(rs.complex_roots[0].re.mid_double() + 0.6299605249474366) < 1e-12);
        CHECK(std::abs(rs.complex_roots[0].im.mid_double() - 1.0911236359717214) < 1e-12);
        CHECK(rs.complex_roots[0].im.is_positive());
    }

    SUBCASE("x^4 + 1 sorted complex places") {
        RootSet rs = find_roots(ZPoly{1, 0, 0, 0, 1}, 128, lad);
        REQUIRE(rs.complex_roots.size() == 2);
        double c = std::sqrt(2.0) / 2;
        CHECK(std::abs(rs.complex_roots[0].re.mid_double() + c) < 1e-12);
        CHECK(std::abs(rs.complex_roots[1].re.mid_double() - c) < 1e-12);
    }

    SUBCASE("quartic x^4 - x^3 - 1") {
        RootSet rs = find_roots(ZPoly{-1, 0, 0, -1, 1}, 128, lad);
        REQUIRE(rs.real_roots.size() == 2);
        REQUIRE(rs.complex_roots.size() == 1);
        CHECK(std::abs(rs.real_roots[0].to_interval(64).mid_double() + 0.8191725133961644) < 1e-12);
        CHECK(std::abs(rs.real_roots[1].to_interval(64).mid_double() - 1.3802775690976141) < 1e-12);
        CHECK(std::abs(rs.complex_roots[0].re.mid_double() - 0.21944747214927516) < 1e-12);
    }

    SUBCASE("integer roots are exact") {
        // (x-2)(x+3)(x^2+1) = x^4 + x^3 - 5x^2 + x - 6
        RootSet rs = find_roots(ZPoly{-6, 1, -5, 1, 1}, 64, lad);
        REQUIRE(rs.real_roots.size() == 2);
        CHECK(rs.real_roots[0].lo == -3);
        CHECK(rs.real_roots[0].hi == -3);
        CHECK(rs.real_roots[1].lo == 2);
        REQUIRE(rs.complex_roots.size() == 1);
        CHECK(std::abs(rs.complex_roots[0].im.mid_double() - 1.0) < 1e-12);
    }
}

TEST_CASE("root enclosures satisfy the residual bound at high precision") {
    RootSet rs = find_roots(ZPoly{-2, 0, 0, 1}, 512, PrecisionLadder{64, 4096});
    Interval rho = rs.real_roots[0].to_interval(600);
    // |f(rho)| must be tiny: evaluate in interval arithmetic
    Interval v = rho * rho * rho - Interval::from_long(2, 600);
    CHECK(v.contains_zero());
    CHECK(v.wid_double() < 1e-140);
}
