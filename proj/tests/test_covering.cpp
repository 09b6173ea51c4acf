#include "doctest.h"

#include "romanov/covering.hpp"
#include "romanov/errors.hpp"
#include "romanov/reference.hpp"

#include <sstream>

using namespace romanov;

TEST_CASE("verify_covering") {
    CHECK(verify_covering(CoveringSystem({{0, 1, 3}})).covered);
    CHECK(verify_covering(CoveringSystem({{0, 2, 3}, {1, 2, 5}})).covered);
    const auto ref = verify_covering(CoveringSystem::reference());
    CHECK(ref.covered);
    CHECK(ref.lcm == 24);

    const auto gap = verify_covering(CoveringSystem({{0, 2, 3}, {0, 3, 7}, {1, 4, 5}}));
    CHECK_FALSE(gap.covered);
    REQUIRE(gap.first_uncovered);
    CHECK(*gap.first_uncovered == 7);
}

TEST_CASE("covering system validation") {
    CHECK_THROWS_AS(CoveringSystem({}), DomainError);
    CHECK_THROWS_AS(CoveringSystem({{2, 2, 3}}), DomainError);
    CHECK_THROWS_AS(CoveringSystem({{0, 2, 9}}), DomainError);
    CHECK_THROWS_AS(CoveringSystem({{0, 2, 2}}), DomainError);
    CHECK_THROWS_AS(CoveringSystem({{0, 2, 3}, {1, 2, 3}}), DomainError);

    std::istringstream in("# reference\n0 2 3\n0 3 7\n1 4 5\n3 8 17\n7 12 13\n23 24 241\n");
    const auto sys = load_covering_system(in);
    CHECK(sys.entries().size() == 6);
    std::istringstream bad("0 2 3\n0 3 3\n");
    try {
        (void)load_covering_system(bad);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("order_divides") {
    CHECK(order_divides(3, 2));
    CHECK(order_divides(7, 3));
    CHECK_FALSE(order_divides(5, 3));
    const auto sys = CoveringSystem::reference();
    for (const auto& e : sys.entries()) CHECK(order_divides(e.p, e.m));
}

TEST_CASE("build_class") {
    const auto sys = CoveringSystem::reference();
    const auto cls = build_class(sys);
    CHECK(cls.M == 11184810);
    CHECK(cls.M == 2ull * 3 * 5 * 7 * 13 * 17 * 241);
    CHECK(cls.r == 7629217);
    CHECK(cls.r % 2 == 1);
    CHECK(cls.r < cls.M);
    for (const auto& e : sys.entries()) CHECK(cls.r % e.p == powmod(2, e.r, e.p));

    CHECK_THROWS_AS(build_class(CoveringSystem({{0, 1, 3}})), DomainError);
    CHECK_THROWS_AS(build_class(CoveringSystem({{0, 2, 3}, {0, 3, 7}})), DomainError);
}

TEST_CASE("verify_class") {
    const auto cls = build_class(CoveringSystem::reference());
    const auto scan = verify_class(cls, 200'000'000);
    CHECK(scan.holds);
    CHECK(scan.exceptions.empty());
    CHECK(scan.members_checked == (200'000'000 - cls.r) / cls.M + 1);
    // members per x consistent with x / M
    const double expected = 200'000'000.0 / static_cast<double>(cls.M);
    CHECK(static_cast<double>(scan.members_checked) <= expected + 1);
    CHECK(static_cast<double>(scan.members_checked) >= expected - 1);
    CHECK(scan.members_above_modulus + scan.small_members.size() == scan.members_checked);

    const auto ref = reference::verify_class(cls, 200'000'000);
    CHECK(ref.holds);
    CHECK(ref.members_checked == scan.members_checked);

    const auto empty = verify_class(cls, cls.r - 1);
    CHECK(empty.holds);
    CHECK(empty.members_checked == 0);

    const auto broken = verify_class({cls.r + 2, cls.M}, 100'000'000);
    CHECK_FALSE(broken.holds);
    CHECK_FALSE(broken.exceptions.empty());
    const auto broken_ref = reference::verify_class({cls.r + 2, cls.M}, 100'000'000);
    CHECK(broken.exceptions == broken_ref.exceptions);

    CHECK_THROWS_AS(verify_class({4, 10}, 100), DomainError);
}
