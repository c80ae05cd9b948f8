#include <doctest.h>

#include "colombeau/colombeau.hpp"

using namespace colombeau;

TEST_CASE("Richardson extrapolation removes linear and quadratic terms") {
    std::vector<double> a;
    for (double e = 0.1; a.size() < 6; e /= 2) a.push_back(2.0 + 3.0 * e - 5.0 * e * e + 0.1 * e * e * e);
    const auto r = richardson(a);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK_THROWS_AS(richardson({1.0, 2.0, 3.0}), InvalidArgument);
}

TEST_CASE("association grids must be dyadic") {
    AssociateOptions opt;
    opt.grid = EpsGrid(0.1, 1e-3, 8);
    CHECK_THROWS_AS(associate<1>(gf::iota(dist::delta(0.0)), default_psis(), default_phis(), std::nullopt, opt),
                    InvalidArgument);
}

TEST_CASE("embedded distributions are associated to themselves") {
    for (const auto& t : {dist::delta(0.0), dist::heaviside(0.0), dist::derivative(1, dist::delta(0.1))}) {
        const auto rep = associate<1>(gf::iota(t), default_psis(), default_phis(), t);
        CAPTURE(t.str());
        CHECK(rep.verdict.kind == AssociationKind::AssociatedTo);
        CHECK(rep.max_deviation() <= 1e-6);
    }
}

TEST_CASE("Heaviside times delta") {
    const auto f = gf::product(gf::iota(dist::heaviside(0.0)), gf::iota(dist::delta(0.0)));
    const auto rep = associate<1>(f, default_psis(), default_phis(), dist::scaled(0.5, dist::delta(0.0)));
    CHECK(rep.verdict.kind == AssociationKind::AssociatedTo);
    CHECK(rep.rows.size() == 6);
    for (const auto& r : rep.rows) CHECK(*r.deviation <= 1e-3);
    // against the wrong candidate
    const auto wrong = associate<1>(f, default_psis(), default_phis(), dist::delta(0.0));
    CHECK(wrong.verdict.kind != AssociationKind::AssociatedTo);
}

TEST_CASE("delta squared diverges") {
    const auto f = gf::product(gf::iota(dist::delta(0.0)), gf::iota(dist::delta(0.0)));
    const auto rep = associate<1>(f, default_psis(), default_phis(), std::nullopt);
    CHECK(rep.verdict.str() == "Divergent(1)");
}

TEST_CASE("Heaviside squared is associated to Heaviside") {
    const auto f = gf::product(gf::iota(dist::heaviside(0.0)), gf::iota(dist::heaviside(0.0)));
    CHECK(associate<1>(f, default_psis(), default_phis(), dist::heaviside(0.0)).verdict.kind ==
          AssociationKind::AssociatedTo);
}

TEST_CASE("product compatibility") {
    CHECK(check_product_compat(smooth::identity(), dist::delta(0.0)).verdict.kind == AssociationKind::AssociatedToZero);
    CHECK(check_product_compat(smooth::cosine(), dist::derivative(1, dist::delta(0.2))).verdict.kind ==
          AssociationKind::AssociatedTo);
    const auto abs = check_product_compat(regular::abs_x_bump(), regular::abs_x_bump(), dist::regular(regular::x2_bump2()));
    CHECK(abs.verdict.kind == AssociationKind::AssociatedTo);
    CHECK(abs.max_deviation() <= 1e-3);
}

TEST_CASE("Lie derivative of an embedding") {
    const auto rep = check_lie_assoc(dist::delta(0.1), fields::sin_theta());
    CHECK(rep.verdict.kind == AssociationKind::AssociatedTo);
}

TEST_CASE("association is linear") {
    const auto f = gf::product(gf::iota(dist::heaviside(0.0)), gf::iota(dist::delta(0.0)));
    const auto g = gf::iota(dist::delta(0.3));
    const auto rep = associate<1>(gf::sum(f, gf::scaled(2.0, g)), default_psis(), default_phis(),
                                  dist::sum(dist::scaled(0.5, dist::delta(0.0)), dist::scaled(2.0, dist::delta(0.3))));
    CHECK(rep.verdict.kind == AssociationKind::AssociatedTo);
}
