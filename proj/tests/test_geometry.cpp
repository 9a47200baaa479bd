#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "zonofuse/geometry.hpp"
#include "zonofuse/rng.hpp"

using namespace zonofuse;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
Zonotope make(std::initializer_list<double> c, const MatrixXd& R) {
    VectorXd cv(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (double v : c) cv(i++) = v;
    return Zonotope(cv, R);
}

double pair_offset_for(const HalfspaceRep& h, const Eigen::Vector2d& dir) {
    for (Eigen::Index i = 0; i < h.pair_count(); ++i) {
        if ((h.normals().row(i).transpose() - dir).norm() < 1e-9) return h.b_plus()(i);
        if ((h.normals().row(i).transpose() + dir).norm() < 1e-9) return h.b_minus()(i);
    }
    FAIL("facet direction not found");
    return 0.0;
}
} // namespace

TEST_CASE("halfspace_rep of an axis box") {
    const Zonotope z = make({0, 0}, (MatrixXd(2, 2) << 1, 0, 0, 2).finished());
    const HalfspaceRep h = halfspace_rep(z);
    CHECK(h.pair_count() == 2);
    CHECK(pair_offset_for(h, Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
    CHECK(pair_offset_for(h, Eigen::Vector2d(0, 1)) == doctest::Approx(2.0));
}

TEST_CASE("halfspace_rep of the rotated square") {
    const Zonotope z = make({0, 0}, (MatrixXd(2, 2) << 1, 1, 1, -1).finished());
    const HalfspaceRep h = halfspace_rep(z);
    CHECK(h.pair_count() == 2);
    const double s2 = std::sqrt(2.0);
    CHECK(pair_offset_for(h, Eigen::Vector2d(1, -1) / s2) == doctest::Approx(s2));
    CHECK(pair_offset_for(h, Eigen::Vector2d(1, 1) / s2) == doctest::Approx(s2));

    // vertex-enumeration round trip: vertices achieve some facet support
    const VertexSet v = vertex_enum(h);
    CHECK(v.count() == 4);
    for (Eigen::Index j = 0; j < v.count(); ++j) {
        bool on_boundary = false;
        for (Eigen::Index i = 0; i < h.pair_count() && !on_boundary; ++i) {
            const double t = h.normals().row(i).dot(v.vertices.col(j));
            on_boundary = std::abs(t - h.b_plus()(i)) <= 1e-9 ||
                          std::abs(t + h.b_minus()(i)) <= 1e-9;
        }
        CHECK(on_boundary);
    }
}

TEST_CASE("halfspace_rep separates interior from exterior points") {
    NoiseStream s(37, "hrep-sampling");
    for (int trial = 0; trial < 20; ++trial) {
        const Zonotope z = oracles::random_zonotope(s, 2, 5);
        const HalfspaceRep h = halfspace_rep(z);
        const MatrixXd H = h.H();
        const VectorXd b = h.b();
        for (int t = 0; t < 200; ++t) {
            const VectorXd in = oracles::sample_point(z, s);
            CHECK(((H * in - b).array() <= 1e-9).all());
        }
        // points pushed past the support in a facet normal must violate a row
        for (Eigen::Index i = 0; i < h.pair_count(); ++i) {
            const VectorXd out = z.center() + h.normals().row(i).transpose() *
                                                  (h.b_plus()(i) - h.normals().row(i).dot(z.center()) + 1e-3);
            CHECK(((H * out - b).array() > 1e-9).any());
        }
    }
    CHECK_THROWS_AS(halfspace_rep(make({0, 0}, (MatrixXd(2, 1) << 1, 1).finished())),
                    DegenerateZonotopeError);
}

TEST_CASE("strips_of matches the pair arithmetic") {
    // pair h = e1 with b = (1, 1): |x| <= 1
    HalfspaceRep h1((MatrixXd(1, 2) << 1, 0).finished(), VectorXd::Constant(1, 1.0),
                    VectorXd::Constant(1, 1.0));
    auto s1 = strips_of(h1);
    CHECK(s1.size() == 1);
    CHECK(s1[0].normal.isApprox((MatrixXd(1, 2) << 1, 0).finished()));
    CHECK(s1[0].offset == doctest::Approx(0.0));

    // pair h = e1 with b = (3, -1), i.e. 1 <= x <= 3: |x - 2| <= 1
    HalfspaceRep h2((MatrixXd(1, 2) << 1, 0).finished(), VectorXd::Constant(1, 3.0),
                    VectorXd::Constant(1, -1.0));
    auto s2 = strips_of(h2);
    CHECK(s2[0].normal.isApprox((MatrixXd(1, 2) << 1, 0).finished()));
    CHECK(s2[0].offset == doctest::Approx(2.0));

    HalfspaceRep flat((MatrixXd(1, 2) << 1, 0).finished(), VectorXd::Constant(1, 1.0),
                      VectorXd::Constant(1, -1.0));
    CHECK_THROWS_AS(strips_of(flat), FlatSetError);
}

TEST_CASE("strips re-intersected reproduce the zonotope support") {
    NoiseStream s(41, "strips-support");
    for (int trial = 0; trial < 10; ++trial) {
        const Zonotope z = oracles::random_zonotope(s, 2, 4);
        const HalfspaceRep h = halfspace_rep(z);
        const auto strips = strips_of(h);
        const Zonotope re = realize_strip_intersection(z.center(), strips);
        for (Eigen::Index i = 0; i < h.pair_count(); ++i) {
            const VectorXd d = h.normals().row(i).transpose();
            CHECK(support(re, d) == doctest::Approx(support(z, d)).epsilon(1e-9));
        }
    }
}

TEST_CASE("vertex_enum on boxes and general halfspace lists") {
    const Zonotope box = make({0, 0}, MatrixXd::Identity(2, 2));
    const VertexSet v = vertex_enum(halfspace_rep(box));
    CHECK(v.count() == 4);

    // box cut by x + y <= 1: five vertices
    MatrixXd H(5, 2);
    H << 1, 0, -1, 0, 0, 1, 0, -1, 1, 1;
    VectorXd b(5);
    b << 1, 1, 1, 1, 1;
    const VertexSet w = vertex_enum(H, b);
    CHECK(w.count() == 5);
    bool has10 = false, has01 = false;
    for (Eigen::Index j = 0; j < w.count(); ++j) {
        if ((w.vertices.col(j) - (VectorXd(2) << 1, 0).finished()).norm() < 1e-9) has10 = true;
        if ((w.vertices.col(j) - (VectorXd(2) << 0, 1).finished()).norm() < 1e-9) has01 = true;
    }
    CHECK(has10);
    CHECK(has01);

    // unbounded and empty detection
    MatrixXd Hu(2, 2);
    Hu << 1, 0, 0, 1;
    CHECK_THROWS_AS(vertex_enum(Hu, VectorXd::Ones(2)), UnboundedError);

    MatrixXd He(4, 2);
    He << 1, 0, -1, 0, 0, 1, 0, -1;
    VectorXd be(4);
    be << 1, -2, 1, 1;  // x <= 1 and x >= 2
    CHECK_THROWS_AS(vertex_enum(He, be), EmptyIntersectionError);
}

TEST_CASE("intersection_vertices") {
    const Zonotope box = make({0, 0}, MatrixXd::Identity(2, 2));
    const VertexSet same = intersection_vertices({box, box});
    CHECK(same.count() == 4);

    // square ∩ shrunken diamond: an octagon, checked against the grid oracle
    const Zonotope diamond = make({0, 0}, 0.75 * (MatrixXd(2, 2) << 1, 1, 1, -1).finished());
    const VertexSet oct = intersection_vertices({box, diamond});
    CHECK(oct.count() == 8);
    const double grid_area = [&] {
        long long cells = 0;
        const double pitch = 1e-2;
        for (double x = -1 + pitch / 2; x < 1; x += pitch)
            for (double y = -1 + pitch / 2; y < 1; y += pitch) {
                const VectorXd p = (VectorXd(2) << x, y).finished();
                if (contains_point(box, p) && contains_point(diamond, p)) ++cells;
            }
        return cells * pitch * pitch;
    }();
    CHECK(std::abs(oracles::polygon_area(oct.vertices) - grid_area) <= 0.05);
    for (Eigen::Index j = 0; j < oct.count(); ++j) {
        CHECK(contains_point(box, oct.vertices.col(j), 1e-7));
        CHECK(contains_point(diamond, oct.vertices.col(j), 1e-7));
    }

    const Zonotope far = make({10, 10}, MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(intersection_vertices({box, far}), EmptyIntersectionError);
}

TEST_CASE("tight_strips tightens to the vertex hull") {
    MatrixXd N(2, 2);
    N << 1, 0, 0, 1;
    HalfspaceRep h(N, VectorXd::Constant(2, 2.0), VectorXd::Constant(2, 2.0));
    MatrixXd verts(2, 4);
    verts << 1, 1, -1, -1, 1, -1, 1, -1;
    const auto strips = tight_strips(VectorXd::Zero(2), h, VertexSet{verts});
    REQUIRE(strips.size() == 2);
    CHECK(strips[0].normal.isApprox((MatrixXd(1, 2) << 1, 0).finished()));
    CHECK(strips[0].offset == doctest::Approx(0.0));
    CHECK(strips[1].normal.isApprox((MatrixXd(1, 2) << 0, 1).finished()));

    // vertices already on the facets: strips coincide with strips_of
    const Zonotope z = make({0.2, -0.1}, (MatrixXd(2, 3) << 1, 0.5, 0, 0, 0.4, 1).finished());
    const HalfspaceRep hz = halfspace_rep(z);
    const VertexSet vz = vertex_enum(hz);
    const auto tight = tight_strips(z.center(), hz, vz);
    const auto plain = strips_of(hz);
    for (std::size_t i = 0; i < tight.size(); ++i) {
        CHECK(tight[i].normal.isApprox(plain[i].normal, 1e-7));
        CHECK(tight[i].offset == doctest::Approx(plain[i].offset).epsilon(1e-7));
    }
}

TEST_CASE("tight strips contain every vertex with one touching") {
    NoiseStream s(43, "tight-enumeration");
    for (int trial = 0; trial < 20; ++trial) {
        const auto zs = oracles::random_overlapping(s, 2, 2, 3, 5);
        const VertexSet overts = intersection_vertices(zs);
        const VectorXd center = overts.vertices.rowwise().mean();
        const HalfspaceRep h = halfspace_rep(zs[0]);
        const auto strips = tight_strips(center, h, overts);
        for (const Strip& sp : strips) {
            double worst = 0.0;
            for (Eigen::Index j = 0; j < overts.count(); ++j) {
                const double t = std::abs(sp.normal.dot(overts.vertices.col(j)) - sp.offset);
                CHECK(t <= 1.0 + 1e-9);
                worst = std::max(worst, t);
            }
            CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("intersect_zonotope_strip closed form") {
    const Zonotope z1 = make({0}, MatrixXd::Constant(1, 1, 1.0));
    const Zonotope a = intersect_zonotope_strip(z1, Strip{(MatrixXd(1, 1) << 1).finished(), 0.0});
    CHECK(a.center()(0) == doctest::Approx(0.0));
    CHECK(a.generators().isApprox((MatrixXd(1, 2) << 0.5, 0.5).finished()));

    const Zonotope b = intersect_zonotope_strip(z1, Strip{(MatrixXd(1, 1) << 2).finished(), 1.0});
    CHECK(b.center()(0) == doctest::Approx(0.4));
    CHECK(b.generators().isApprox((MatrixXd(1, 2) << 0.2, 0.4).finished()));

    // strip containing z entirely: still an enclosure, norm never grows
    NoiseStream s(47, "strip-monotone");
    for (int trial = 0; trial < 100; ++trial) {
        const Zonotope z = oracles::random_zonotope(s, 2, 4);
        Strip sp;
        sp.normal = (MatrixXd(1, 2) << s.uniform(), s.uniform()).finished();
        if (sp.normal.norm() < 0.1) continue;
        sp.offset = s.uniform();
        const Zonotope out = intersect_zonotope_strip(z, sp);
        const WeightMatrix W = WeightMatrix::identity(2);
        CHECK(weighted_norm_sq(out, W) <= weighted_norm_sq(z, W) * (1 + 1e-12));
        // enclosure of z ∩ strip
        for (int t = 0; t < 200; ++t) {
            const VectorXd p = oracles::sample_point(z, s);
            if (std::abs(sp.normal.dot(p) - sp.offset) <= 1.0)
                CHECK(contains_point(out, p, 1e-7));
        }
    }

    const Zonotope flat = make({5, 0}, (MatrixXd(2, 1) << 0, 1).finished());
    CHECK_THROWS_AS(
        intersect_zonotope_strip(flat, Strip{(MatrixXd(1, 2) << 1, 0).finished(), 0.0}),
        EmptyIntersectionError);
}

TEST_CASE("symmetric polygon recovery") {
    MatrixXd sq(2, 4);
    sq << 1, 1, -1, -1, 1, -1, 1, -1;
    const Zonotope z = symmetric_polygon_to_zonotope(VectorXd::Zero(2), VertexSet{sq});
    CHECK(z.order() == 2);
    // generators are ±e1, ±e2 up to order and sign
    for (Eigen::Index j = 0; j < 2; ++j) {
        const VectorXd g = z.generators().col(j).cwiseAbs();
        CHECK(((g - (VectorXd(2) << 1, 0).finished()).norm() < 1e-9 ||
               (g - (VectorXd(2) << 0, 1).finished()).norm() < 1e-9));
    }

    // hexagon round trip
    const Zonotope hexa = make({0, 0}, (MatrixXd(2, 3) << 1, 1, 0, 0, 1, 1).finished());
    const VertexSet hv = vertex_enum(halfspace_rep(hexa));
    const Zonotope back = symmetric_polygon_to_zonotope(hexa.center(), hv);
    const VertexSet bv = vertex_enum(halfspace_rep(back));
    CHECK(bv.count() == hv.count());
    for (Eigen::Index j = 0; j < hv.count(); ++j) {
        double best = 1e9;
        for (Eigen::Index q = 0; q < bv.count(); ++q)
            best = std::min(best, (hv.vertices.col(j) - bv.vertices.col(q)).norm());
        CHECK(best <= 1e-8);
    }

    MatrixXd tri(2, 3);
    tri << 1, -1, 0, 0, 0, 1;
    CHECK_THROWS_AS(symmetric_polygon_to_zonotope(VectorXd::Zero(2), VertexSet{tri}),
                    NotCentrallySymmetricError);
}

TEST_CASE("vertex round trip touches the boundary of random zonotopes") {
    NoiseStream s(53, "roundtrip");
    for (int trial = 0; trial < 12; ++trial) {
        const Eigen::Index n = 2 + (trial % 2);
        const Zonotope z = oracles::random_zonotope(s, n, n + 3);
        const HalfspaceRep h = halfspace_rep(z);
        const VertexSet v = vertex_enum(h);
        CHECK(v.count() >= n + 1);
        for (Eigen::Index j = 0; j < v.count(); ++j) {
            CHECK(contains_point(z, v.vertices.col(j), 1e-7));
            bool touching = false;
            for (Eigen::Index i = 0; i < h.pair_count() && !touching; ++i) {
                const double t = h.normals().row(i).dot(v.vertices.col(j));
                touching = std::abs(t - h.b_plus()(i)) <= 1e-7 * (1 + std::abs(h.b_plus()(i))) ||
                           std::abs(t + h.b_minus()(i)) <= 1e-7 * (1 + std::abs(h.b_minus()(i)));
            }
            CHECK(touching);
        }
    }
}
