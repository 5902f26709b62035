#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "shiplab/guidance.hpp"
#include "shiplab/rng.hpp"

using namespace shiplab;

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(wrap_angle(2 * M_PI + 0.1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(wrap_angle(-2 * M_PI - 0.1) == doctest::Approx(-0.1).epsilon(1e-12));

  RngStream rng(17);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(-40.0, 40.0);
    const double w = wrap_angle(a);
    REQUIRE(w > -M_PI - 1e-15);
    REQUIRE(w <= M_PI + 1e-15);
    // Same direction on the circle.
    REQUIRE(std::remainder(w - a, 2 * M_PI) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("path segment tangent") {
  CHECK(path_tangent_angle({{0, 0}, {1, 0}}) == doctest::Approx(0.0));
  CHECK(path_tangent_angle({{0, 0}, {0, 2}}) == doctest::Approx(M_PI / 2));
  CHECK(path_tangent_angle({{1, 1}, {2, 2}}) == doctest::Approx(M_PI / 4));
}

TEST_CASE("cross-track error") {
  SUBCASE("hand-worked example") {
    const PathSegment seg{{0, 0}, {3, 4}};
    CHECK(cross_track_error({3, 0}, seg) == doctest::Approx(-2.4).epsilon(1e-12));
  }

  SUBCASE("sign convention: starboard of the path is positive") {
    const PathSegment north{{0, 0}, {10, 0}};
    CHECK(cross_track_error({5, 1}, north) > 0.0);
    CHECK(cross_track_error({5, -1}, north) < 0.0);
  }

  SUBCASE("on-path points have zero error") {
    const PathSegment seg{{1, 2}, {4, 6}};
    CHECK(cross_track_error({2.5, 4.0}, seg) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("reversing the segment flips the sign") {
    RngStream rng(3);
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector2d a(rng.uniform(-5, 5), rng.uniform(-5, 5));
      const Eigen::Vector2d b = a + Eigen::Vector2d(rng.uniform(0.5, 5), rng.uniform(0.5, 5));
      const Eigen::Vector2d p(rng.uniform(-5, 5), rng.uniform(-5, 5));
      const double fwd = cross_track_error(p, {a, b});
      const double rev = cross_track_error(p, {b, a});
      REQUIRE(fwd == doctest::Approx(-rev).epsilon(1e-10));
    }
  }

  SUBCASE("translation invariance") {
    const PathSegment seg{{0, 0}, {3, 4}};
    const Eigen::Vector2d shift(7.3, -2.1);
    const PathSegment moved{seg.a + shift, seg.b + shift};
    CHECK(cross_track_error(Eigen::Vector2d(3, 0) + shift, moved) ==
          doctest::Approx(-2.4).epsilon(1e-12));
  }

  SUBCASE("degenerate segment is rejected") {
    CHECK_THROWS_AS(cross_track_error({1, 1}, {{2, 2}, {2, 2}}), std::invalid_argument);
  }
}

TEST_CASE("course angle and course error") {
  VesselState s;
  s.psi = 0.2;
  s.u = 0.9;
  s.v = -0.1;
  // Sideslip atan2(0.1, 0.9) rotates the velocity to starboard of the bow.
  CHECK(course_angle(s) == doctest::Approx(0.2 + std::atan(1.0 / 9.0)).epsilon(1e-12));
  CHECK(course_error(s, 0.0) ==
        doctest::Approx(-(0.2 + std::atan(1.0 / 9.0))).epsilon(1e-12));

  SUBCASE("pure surge keeps course equal to heading") {
    VesselState t;
    t.psi = 1.1;
    t.u = 0.5;
    CHECK(course_angle(t) == doctest::Approx(1.1).epsilon(1e-15));
  }

  SUBCASE("error wraps across the branch cut") {
    VesselState t;
    t.psi = 3.0;
    t.u = 1.0;
    CHECK(course_error(t, -3.0) ==
          doctest::Approx(2 * M_PI - 6.0).epsilon(1e-12));
  }

  SUBCASE("zero speed has no course") {
    VesselState t;
    CHECK_THROWS_AS(course_angle(t), std::domain_error);
  }
}

TEST_CASE("waypoint bookkeeping") {
  WaypointPath path;
  path.waypoints = {{5, 0}, {5, 5}};
  path.start = {0, 0};
  path.acceptance_radius = 0.5;

  SUBCASE("validity") {
    CHECK(path.valid());
    WaypointPath empty;
    CHECK_FALSE(empty.valid());
    WaypointPath bad = path;
    bad.active_index = 2;
    CHECK_FALSE(bad.valid());
  }

  SUBCASE("active segment starts at the episode start") {
    const PathSegment seg = active_segment(path);
    CHECK(seg.a.isApprox(Eigen::Vector2d(0, 0)));
    CHECK(seg.b.isApprox(Eigen::Vector2d(5, 0)));
  }

  SUBCASE("far away: nothing advances") {
    const AdvanceResult res = waypoint_advance(path, {1, 1});
    CHECK_FALSE(res.reached);
    CHECK_FALSE(res.finished);
    CHECK(path.active_index == 0);
  }

  SUBCASE("the acceptance boundary itself does not count") {
    const AdvanceResult res = waypoint_advance(path, {4.5, 0});
    CHECK_FALSE(res.reached);
  }

  SUBCASE("inside the radius advances to the next leg") {
    const AdvanceResult res = waypoint_advance(path, {4.6, 0});
    CHECK(res.reached);
    CHECK_FALSE(res.finished);
    CHECK(path.active_index == 1);
    const PathSegment seg = active_segment(path);
    CHECK(seg.a.isApprox(Eigen::Vector2d(5, 0)));
    CHECK(seg.b.isApprox(Eigen::Vector2d(5, 5)));
  }

  SUBCASE("reaching the last waypoint finishes the path") {
    waypoint_advance(path, {4.6, 0});
    const AdvanceResult res = waypoint_advance(path, {5, 4.7});
    CHECK(res.reached);
    CHECK(res.finished);
    CHECK(path.finished);
  }
}

TEST_CASE("integral line-of-sight") {
  SUBCASE("proportional part, zero integral gain") {
    IlosState ilos;
    ilos.lookahead = 2.0;
    ilos.gain = 0.0;
    const double psi_d = ilos_desired_heading(ilos, 2.0, 0.0, 0.1);
    CHECK(psi_d == doctest::Approx(-M_PI / 4).epsilon(1e-12));
    // y_int_dot = Delta e / (Delta^2 + e^2) = 4/8.
    CHECK(ilos.y_int == doctest::Approx(0.05).epsilon(1e-12));
  }

  SUBCASE("integral offset shifts the heading") {
    IlosState ilos;
    ilos.lookahead = 2.0;
    ilos.gain = 0.05;
    ilos.y_int = 1.0;
    const double psi_d = ilos_desired_heading(ilos, 2.0, 0.0, 0.1);
    CHECK(psi_d == doctest::Approx(-std::atan(2.05 / 2.0)).epsilon(1e-12));
  }

  SUBCASE("path tangent is passed straight through at zero error") {
    IlosState ilos;
    const double psi_d = ilos_desired_heading(ilos, 0.0, 1.234, 0.1);
    CHECK(psi_d == doctest::Approx(1.234).epsilon(1e-15));
    CHECK(ilos.y_int == 0.0);
  }

  SUBCASE("integral state grows monotonically under persistent offset") {
    IlosState ilos;
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
      ilos_desired_heading(ilos, 1.5, 0.0, 0.1);
      REQUIRE(ilos.y_int > prev);
      prev = ilos.y_int;
    }
  }

  SUBCASE("non-positive step is rejected") {
    IlosState ilos;
    CHECK_THROWS_AS(ilos_desired_heading(ilos, 1.0, 0.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("pd heading autopilot") {
  const PdGains gains;  // kp 2.5, kd 4.0
  VesselState s;
  s.u = 1.0;

  SUBCASE("proportional response") {
    CHECK(pd_rudder(0.1, s, gains) == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("damping response") {
    s.r = 0.05;
    CHECK(pd_rudder(0.0, s, gains) == doctest::Approx(-0.2).epsilon(1e-12));
  }

  SUBCASE("saturates at the mechanical stop") {
    CHECK(pd_rudder(1.0, s, gains) == doctest::Approx(kMaxRudder).epsilon(1e-12));
    CHECK(pd_rudder(-1.0, s, gains) == doctest::Approx(-kMaxRudder).epsilon(1e-12));
  }

  SUBCASE("heading error is wrapped before the gain") {
    s.psi = -3.1;
    const double expect = 2.5 * (3.1 + 3.1 - 2 * M_PI);
    CHECK(pd_rudder(3.1, s, gains) == doctest::Approx(expect).epsilon(1e-9));
  }
}
