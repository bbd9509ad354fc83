#include <cmath>

#include "doctest.h"
#include "logopole/coords.hpp"
#include "logopole/errors.hpp"
#include "support.hpp"

using namespace logopole;
using testing_support::rel_err;

TEST_CASE("make_point examples")
{
    auto p = make_point(0.0, 0.5, 0.0, 1.0);
    CHECK(p.offset().xi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.offset().eta == doctest::Approx(0.0));

    p = make_point(0.0, 2.0, 0.0, 1.0);
    CHECK(p.frame(Frame::O).r == doctest::Approx(2.0));
    CHECK(p.frame(Frame::Primed).r == doctest::Approx(1.0));
    CHECK(p.offset().xi == doctest::Approx(3.0));
    CHECK(p.offset().eta == doctest::Approx(1.0));

    p = make_point(0.0, 0.0, 0.0, 1.0);
    CHECK(p.frame(Frame::DoublePrimed).r == doctest::Approx(1.0));
    CHECK(p.frame(Frame::Primed).r == doctest::Approx(1.0));
    CHECK(p.centred().xi == doctest::Approx(1.0));
    CHECK(p.centred().eta == doctest::Approx(0.0));
}

TEST_CASE("make_point errors")
{
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of([] { make_point(1.0, 0.0, 0.0, 0.0); }) == ErrorKind::NonPositiveScale);
    CHECK(kind_of([] { make_point(1.0, 0.0, 0.0, -2.0); }) == ErrorKind::NonPositiveScale);
    CHECK(kind_of([] { make_point(-0.1, 0.0, 0.0, 1.0); }) == ErrorKind::NegativeRho);
}

TEST_CASE("hat convention scales with R")
{
    const auto a = make_point(0.7, 0.3, 0.2, 1.0);
    const auto b = make_point(2.1, 0.9, 0.2, 3.0);
    CHECK(rel_err(a.offset().xi, b.offset().xi) < 1e-15);
    CHECK(rel_err(a.centred().eta, b.centred().eta) < 1e-15);
    CHECK(rel_err(a.frame(Frame::Primed).r, b.frame(Frame::Primed).r) < 1e-15);
}

TEST_CASE("singular_distance examples")
{
    CHECK(singular_distance(make_point(0.3, 0.5, 0.0, 1.0)) == doctest::Approx(0.3));
    CHECK(singular_distance(make_point(0.0, 2.0, 0.0, 1.0)) == doctest::Approx(1.0));
    CHECK(singular_distance(make_point(0.0, 0.7, 0.0, 1.0)) == 0.0);
    CHECK(singular_distance(make_point(3.0, -4.0, 0.0, 1.0)) == doctest::Approx(5.0));
}

TEST_CASE("invariants over a quasi-random sample")
{
    const auto pts = testing_support::quasi_random_points(400, 3.0, -2.0, 3.0, 1e-6);
    for (const auto& q : pts) {
        const double R = 1.3;
        const auto p = make_point(q.rho * R, q.z * R, 0.4, R);
        const auto& o = p.frame(Frame::O);
        const auto& pr = p.frame(Frame::Primed);
        const auto& pp = p.frame(Frame::DoublePrimed);
        const auto& ob = p.offset();
        const auto& c = p.centred();

        CHECK(c.xi >= 1.0);
        CHECK(std::fabs(c.eta) <= 1.0);
        CHECK(ob.xi >= 1.0);
        CHECK(std::fabs(ob.eta) <= 1.0);
        CHECK(ob.xi * ob.xi - ob.eta * ob.eta > 0.0);

        CHECK(std::fabs(pp.r * pp.u - pr.r * pr.u - 2.0) <= 1e-13 * std::max(1.0, pp.r + pr.r));
        CHECK(std::fabs(o.r * o.u - pr.r * pr.u - 1.0) <= 1e-13 * std::max(1.0, o.r + pr.r));
        CHECK(rel_err(ob.xi, o.r + pr.r) < 1e-14);
        CHECK(rel_err(c.xi, (pp.r + pr.r) / 2.0) < 1e-14);
        CHECK(std::fabs(ob.eta - (o.r - pr.r)) < 1e-13);

        const auto back = point_from_offset(ob.xi, ob.eta, p.phi(), R);
        CHECK(rel_err(back.rho(), p.rho()) < 1e-13);
        CHECK(std::fabs(back.z() - p.z()) < 1e-13 * std::max(std::fabs(p.z()), R));

        const auto backc = point_from_centred(c.xi, c.eta, p.phi(), R);
        CHECK(rel_err(backc.rho(), p.rho()) < 1e-12);
        CHECK(std::fabs(backc.z() - p.z()) < 1e-12 * std::max(std::fabs(p.z()), R));

        // atanh(1/xi) = [atanh(u'') - atanh(u')]/2
        if (std::fabs(pr.u) < 1.0 && std::fabs(pp.u) < 1.0) {
            const double lhs = std::atanh(1.0 / c.xi);
            const double rhs = 0.5 * (std::atanh(pp.u) - std::atanh(pr.u));
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)));
        }
    }
}

TEST_CASE("near-axis pieces stay accurate")
{
    // 1 - u and xibar - 1 are O(rho^2) here; naive subtraction would lose them.
    const double rho = 1e-9;
    const auto p = make_point(rho, 2.0, 0.0, 1.0);
    const auto& o = p.frame(Frame::O);
    CHECK(rel_err(o.one_minus_u, rho * rho / (2.0 * (2.0 + std::hypot(rho, 2.0)))) < 1e-14);
    // xibar - 1 = (r - z) + (r' + z - 1) -> rho^2/(r+z) + 2(z-1) + O(rho^2)
    CHECK(std::fabs(p.offset().xi_minus_1 - 2.0) < 1e-14);
    CHECK(rel_err(p.offset().one_minus_eta2, 4.0 * rho * rho / p.offset().xi2_minus_1) < 1e-14);

    const auto q = make_point(rho, 0.5, 0.0, 1.0);
    const double expect = 0.5 * (rho * rho / (0.5 * (0.5 + std::hypot(rho, 0.5)))) * 2.0;
    CHECK(rel_err(q.offset().xi_minus_1, expect) < 1e-12);
}

TEST_CASE("flip and shift transforms")
{
    const auto p = make_point(0.4, 0.3, 0.1, 2.0);
    CHECK(flipped(p).z() == doctest::Approx(1.7));
    CHECK(shifted(p).z() == doctest::Approx(2.3));
    CHECK(flipped(p).rho() == p.rho());
}
