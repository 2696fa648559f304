#include <doctest.h>

#include <cmath>
#include <random>

#include "planforge/geom.hpp"

#include "oracles.hpp"

using namespace planforge;
using geom::Line2;
using geom::SimplePolygon;

TEST_CASE("line through two points is canonical and contains both") {
  Line2 l = Line2::through(Vec2(0, 1), Vec2(2, 1));
  CHECK(l.normal.y() > 0);
  CHECK(l.signed_distance(Vec2(0, 1)) == doctest::Approx(0.0));
  CHECK(l.signed_distance(Vec2(5, 1)) == doctest::Approx(0.0));
  CHECK(l.signed_distance(Vec2(0, 3)) == doctest::Approx(2.0));

  // Vertical line: canonical normal has positive x.
  Line2 v = Line2::through(Vec2(2, 0), Vec2(2, 5));
  CHECK(v.normal.x() == doctest::Approx(1.0));
  CHECK(v.normal.y() == doctest::Approx(0.0));
  CHECK(v.offset == doctest::Approx(2.0));
}

TEST_CASE("tls fit matches closed-form orthogonal regression") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> jitter(0.0, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_real_distribution<double> ang(0.0, M_PI);
    const double theta = ang(rng);
    const Vec2 dir(std::cos(theta), std::sin(theta));
    std::vector<Vec2> pts;
    for (int i = 0; i < 40; ++i) {
      const double t = 0.1 * i;
      pts.push_back(Vec2(1.0, -2.0) + t * dir + jitter(rng) * Vec2(-dir.y(), dir.x()));
    }
    const Line2 fit = geom::fit_line_tls(pts);
    const Line2 ref = oracle::tls_line_closed_form(pts);
    CHECK(std::abs(fit.normal.dot(ref.normal)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(fit.offset) == doctest::Approx(std::abs(ref.offset)).epsilon(1e-6));
  }
}

TEST_CASE("tls fit is exact on collinear points") {
  std::vector<Vec2> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const Line2 l = geom::fit_line_tls(pts);
  for (const auto& p : pts) CHECK(l.signed_distance(p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ransac recovers a line despite gross outliers") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(Vec2(0.1 * i, 1.0));
  pts.push_back(Vec2(0.5, 5.0));
  pts.push_back(Vec2(1.5, -3.0));
  pts.push_back(Vec2(2.5, 9.0));
  const auto res = geom::fit_line_ransac(pts, 0.02, 200, 42);
  CHECK(res.inliers.size() == 30);
  for (int i = 0; i < 30; ++i) CHECK(res.inliers[i] == i);
  CHECK(res.line.signed_distance(Vec2(0, 1)) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(res.line.normal.y()) == doctest::Approx(1.0));
}

TEST_CASE("ransac is deterministic for a fixed seed") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(Vec2(u(rng), u(rng)));
  const auto a = geom::fit_line_ransac(pts, 0.1, 100, 9);
  const auto b = geom::fit_line_ransac(pts, 0.1, 100, 9);
  CHECK(a.inliers == b.inliers);
  CHECK(a.line.offset == b.line.offset);
  CHECK(a.line.normal == b.line.normal);
}

TEST_CASE("ransac throws on fewer than two points") {
  CHECK_THROWS_AS(geom::fit_line_ransac({Vec2(0, 0)}, 0.1, 10, 0), FewerThanTwoPoints);
}

TEST_CASE("project_segment spans the extreme projections") {
  Line2 l = Line2::through(Vec2(0, 0), Vec2(1, 0));
  const auto seg = geom::project_segment(l, {{0.5, 0.3}, {3.0, -0.2}, {1.0, 0.0}});
  // Endpoints lie on the line at the extreme tangents.
  const double lo = std::min(seg.a.x(), seg.b.x());
  const double hi = std::max(seg.a.x(), seg.b.x());
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(3.0));
  CHECK(seg.a.y() == doctest::Approx(0.0));
  CHECK(seg.b.y() == doctest::Approx(0.0));
}

TEST_CASE("project_segment rejects a degenerate span") {
  Line2 l = Line2::through(Vec2(0, 0), Vec2(1, 0));
  CHECK_THROWS_AS(geom::project_segment(l, {{1.0, 0.5}, {1.0, -0.5}}), DegenerateInput);
}

TEST_CASE("line intersection") {
  Line2 h = Line2::through(Vec2(0, 2), Vec2(1, 2));
  Line2 v = Line2::through(Vec2(3, 0), Vec2(3, 1));
  const auto p = geom::line_intersection(h, v);
  REQUIRE(p.has_value());
  CHECK(p->x() == doctest::Approx(3.0));
  CHECK(p->y() == doctest::Approx(2.0));

  Line2 h2 = Line2::through(Vec2(0, 5), Vec2(1, 5));
  CHECK_FALSE(geom::line_intersection(h, h2).has_value());
}

TEST_CASE("polygon area, centroid and orientation") {
  SimplePolygon square{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  CHECK(geom::polygon_area(square) == doctest::Approx(4.0));
  CHECK(geom::signed_area(square.corners) == doctest::Approx(4.0));
  const Vec2 c = geom::polygon_centroid(square);
  CHECK(c.x() == doctest::Approx(1.0));
  CHECK(c.y() == doctest::Approx(1.0));

  // L-shape: 3x3 square minus 2x2 notch -> area 5. Centroid checked against
  // the decomposition (3x1 bottom strip + 1x2 left column).
  SimplePolygon ell{{{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}}};
  CHECK(geom::polygon_area(ell) == doctest::Approx(5.0));
  const Vec2 ce = geom::polygon_centroid(ell);
  CHECK(ce.x() == doctest::Approx((3 * 1.5 + 2 * 0.5) / 5.0));
  CHECK(ce.y() == doctest::Approx((3 * 0.5 + 2 * 2.0) / 5.0));
}

TEST_CASE("simplicity checks") {
  SimplePolygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK(geom::is_simple(square));
  SimplePolygon clockwise{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
  CHECK_FALSE(geom::is_simple(clockwise));
  SimplePolygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  CHECK_FALSE(geom::is_simple(bowtie));
  SimplePolygon degenerate{{{0, 0}, {1, 0}}};
  CHECK_FALSE(geom::is_simple(degenerate));
  SimplePolygon repeated{{{0, 0}, {1, 0}, {1, 0}, {0, 1}}};
  CHECK_FALSE(geom::is_simple(repeated));
}

TEST_CASE("point in polygon with a concave shape") {
  std::vector<Vec2> ell{{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}};
  CHECK(geom::point_in_polygon(Vec2(0.5, 0.5), ell));
  CHECK(geom::point_in_polygon(Vec2(2.5, 0.5), ell));
  CHECK(geom::point_in_polygon(Vec2(0.5, 2.5), ell));
  CHECK_FALSE(geom::point_in_polygon(Vec2(2.0, 2.0), ell));
  CHECK_FALSE(geom::point_in_polygon(Vec2(-1.0, 0.5), ell));
}

TEST_CASE("rasterize a unit square") {
  SimplePolygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  geom::GridTransform t{4.0, Vec2(0, 0)};  // square maps to [0,4]x[0,4]
  const auto mask = geom::rasterize(square, 4, 4, t);
  CHECK(mask.count() == 16);  // all 16 centers fall strictly inside

  // Half-size square covers the lower-left 2x2 block only.
  SimplePolygon half{{{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}}};
  const auto m2 = geom::rasterize(half, 4, 4, t);
  CHECK(m2.count() == 4);
  CHECK(m2.at(0, 0));
  CHECK(m2.at(1, 1));
  CHECK_FALSE(m2.at(2, 0));
  CHECK_FALSE(m2.at(0, 2));
}

TEST_CASE("rasterize rejects out-of-grid polygons") {
  SimplePolygon square{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}};
  geom::GridTransform t{4.0, Vec2(0, 0)};
  CHECK_THROWS_AS(geom::rasterize(square, 4, 4, t), OutOfBounds);
}

TEST_CASE("mask iou") {
  SimplePolygon a{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  SimplePolygon b{{{1, 0}, {3, 0}, {3, 2}, {1, 2}}};
  geom::GridTransform t{8.0, Vec2(0, 0)};
  const auto ma = geom::rasterize(a, 32, 32, t);
  const auto mb = geom::rasterize(b, 32, 32, t);
  CHECK(geom::mask_iou(ma, ma) == doctest::Approx(1.0));
  CHECK(geom::mask_iou(ma, mb) == doctest::Approx(1.0 / 3.0).epsilon(0.01));

  auto empty1 = ma, empty2 = mb;
  std::fill(empty1.cells.begin(), empty1.cells.end(), 0);
  std::fill(empty2.cells.begin(), empty2.cells.end(), 0);
  CHECK(geom::mask_iou(empty1, empty2) == doctest::Approx(0.0));

  auto other = geom::rasterize(a, 16, 16, geom::GridTransform{4.0, Vec2(0, 0)});
  CHECK_THROWS_AS(geom::mask_iou(ma, other), DimMismatch);
}

TEST_CASE("boundary tracing of a single cell") {
  const auto loops = geom::trace_boundary_loops(3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0});
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].size() == 4);
  CHECK(geom::signed_area(loops[0]) == doctest::Approx(1.0));
}

TEST_CASE("boundary tracing merges collinear runs") {
  // 2x1 horizontal bar -> rectangle with exactly 4 corners, area 2.
  const auto loops = geom::trace_boundary_loops(3, 2, {1, 1, 0, 0, 0, 0});
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].size() == 4);
  CHECK(geom::signed_area(loops[0]) == doctest::Approx(2.0));
}

TEST_CASE("boundary tracing of an L region") {
  // Cells (0,0), (1,0), (0,1): 6-corner loop, area 3.
  const auto loops = geom::trace_boundary_loops(2, 2, {1, 1, 1, 0});
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].size() == 6);
  CHECK(geom::signed_area(loops[0]) == doctest::Approx(3.0));
}

TEST_CASE("boundary tracing splits diagonal pinches into separate loops") {
  // Cells (0,0) and (1,1) touch only at a corner: two unit loops.
  const auto loops = geom::trace_boundary_loops(2, 2, {1, 0, 0, 1});
  REQUIRE(loops.size() == 2);
  for (const auto& loop : loops) {
    CHECK(loop.size() == 4);
    CHECK(geom::signed_area(loop) == doctest::Approx(1.0));
  }
}

TEST_CASE("largest component keeps only the biggest region") {
  // Row-major 4x1: [1 1 0 1] -> the pair on the left wins.
  const auto out = geom::largest_component(4, 1, {1, 1, 0, 1});
  CHECK(out == std::vector<std::uint8_t>{1, 1, 0, 0});
}

TEST_CASE("simplify_loop removes collinear and duplicate corners") {
  std::vector<Vec2> loop{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {2, 2}, {0, 2}};
  const auto out = geom::simplify_loop(loop);
  CHECK(out.size() == 4);
  CHECK(geom::signed_area(out) == doctest::Approx(4.0));
}
