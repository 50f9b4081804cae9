#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sfd/twisters.hpp"

using namespace sfd;

namespace {

std::shared_ptr<NumberField> sqrt5() {
    return std::make_shared<NumberField>(ZPoly{-1, -1, 1}, 128);
}
std::shared_ptr<NumberField> cbrt2() {
    return std::make_shared<NumberField>(ZPoly{-2, 0, 0, 1}, 128);
}
std::shared_ptr<NumberField> quartic() {
    return std::make_shared<NumberField>(ZPoly{-1, 0, 0, -1, 1}, 128);
}

} // namespace

TEST_CASE("trivial twister for totally real fields") {
    auto k = sqrt5();
    Twister tw = construct_twister(k, {});
    CHECK(tw.complete());
    CHECK(tw.size() == 1);
    CHECK(tw.lookup(IVec{5}) == k->one());
    TwisterReport rep = validate_twister(*k, tw);
    CHECK(rep.all_ok);
}

TEST_CASE("manual entries: argument windows at N=3") {
    auto k = cbrt2();
    SUBCASE("identity in class 0 is valid (arg 0 within pi/6)") {
        Twister tw(k, {3});
        tw.set_entry({0}, k->one());
        tw.set_entry({1}, k->one());
        tw.set_entry({2}, k->one());
        TwisterReport rep = validate_twister(*k, tw);
        CHECK(rep.complete);
        CHECK(!rep.all_ok);
        for (const auto& e : rep.entries) {
            if (e.cls[0] == 0) {
                CHECK(e.ok);
                CHECK(e.halfwidth[0] == doctest::Approx(M_PI / 6).epsilon(1e-12));
            } else {
                CHECK(!e.ok); // arg 0, target 2 pi c/3: deviation beyond window
            }
        }
    }
    SUBCASE("incomplete table reported") {
        Twister tw(k, {3});
        tw.set_entry({0}, k->one());
        CHECK(!tw.complete());
        CHECK(!validate_twister(*k, tw).complete);
    }
}

TEST_CASE("constructed twister validates with margin") {
    auto k = cbrt2();
    Twister tw = construct_twister(k, {3}, 0.25, 16);
    REQUIRE(tw.complete());
    // class 0 target vector is hit exactly by 1
    CHECK(tw.entry({0}) == k->one());
    TwisterReport rep = validate_twister(*k, tw);
    CHECK(rep.all_ok);
    CHECK(rep.min_slack >= 0.25);
    for (const auto& e : rep.entries) CHECK(e.totally_positive);
}

TEST_CASE("twister lookup is lattice periodic") {
    auto k = cbrt2();
    Twister tw = construct_twister(k, {3});
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        IVec x{(long)(rng() % 19) - 9, (long)(rng() % 19) - 9};
        IVec lam{(long)(rng() % 7) - 3, 3 * ((long)(rng() % 7) - 3)};
        IVec y{x[0] + lam[0], x[1] + lam[1]};
        CHECK(tw.lookup(x) == tw.lookup(y));
    }
}

TEST_CASE("window width grows with N") {
    auto k = cbrt2();
    double prev = 0;
    for (long long N : {3, 4, 5}) {
        Twister tw = construct_twister(k, {N});
        TwisterReport rep = validate_twister(*k, tw);
        CHECK(rep.all_ok);
        REQUIRE(!rep.entries.empty());
        double hw = rep.entries[0].halfwidth[0];
        CHECK(hw == doctest::Approx(M_PI / 2 - M_PI / N).epsilon(1e-12));
        CHECK(hw > prev);
        prev = hw;
    }
}

TEST_CASE("construct handles the quartic fixture") {
    auto k = quartic();
    Twister tw = construct_twister(k, {3});
    CHECK(tw.complete());
    TwisterReport rep = validate_twister(*k, tw);
    CHECK(rep.all_ok);
    CHECK(rep.min_slack >= 0.25);
}

TEST_CASE("construct rejects bad parameters") {
    auto k = cbrt2();
    CHECK_THROWS_AS(construct_twister(k, {2}), BadSectorCount);
    CHECK_THROWS_AS(construct_twister(k, {}), BadSectorCount);
    CHECK_THROWS_AS(construct_twister(k, {3}, 1.5), Error);
}
