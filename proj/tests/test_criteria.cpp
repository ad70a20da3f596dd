// test_criteria.cpp
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dissop/criteria.hpp"
#include "dissop/oracle.hpp"
#include "test_specs.hpp"

using namespace dissop;

namespace {

std::vector<cxd> geometric_ladder(int k_max) {
    std::vector<cxd> pts;
    for (int k = 0; k <= k_max; ++k) pts.emplace_back(0.0, std::pow(2.0, k));
    return pts;
}

std::vector<cxd> accumulating_cluster(int n_max) {
    std::vector<cxd> pts;
    for (int n = 1; n <= n_max; ++n) pts.emplace_back(0.0, 1.0 / (static_cast<double>(n) * n));
    return pts;
}

ZGrid grid_for_points(const std::vector<cxd>& pts, int nx = 33, int ny = 49) {
    double im_min = 1e30, im_max = 0.0, re_min = 0.0, re_max = 0.0;
    for (const auto& z : pts) {
        im_min = std::min(im_min, z.imag());
        im_max = std::max(im_max, z.imag());
        re_min = std::min(re_min, z.real());
        re_max = std::max(re_max, z.real());
    }
    return ZGrid::make(re_min - 1.0, re_max + 1.0, 0.5 * im_min, 10.0 * im_max, nx, ny);
}

}  // namespace

TEST_CASE("zgrid is deterministic and positive") {
    const ZGrid g = ZGrid::make(-1.0, 1.0, 1e-2, 1e2, 41, 41);
    CHECK(g.points().size() == 41 * 41);
    for (const auto& z : g.points()) CHECK(z.imag() > 0.0);
    const ZGrid g2 = ZGrid::make(-1.0, 1.0, 1e-2, 1e2, 41, 41);
    CHECK(g.points() == g2.points());
    CHECK_THROWS_AS(ZGrid::make(0, 1, -1.0, 1.0, 4, 4), InputError);
}

TEST_CASE("lrg_constant") {
    SUBCASE("one-atom normal spec attains 1") {
        const auto spec = testing::one_atom_spec();
        const double c1 = lrg_constant(spec, ZGrid::for_spec(spec, 16, 16));
        CHECK(c1 == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("selfadjoint diagonal attains 1") {
        const auto spec = OperatorSpec::scalar_atomic({{0.3, 1.0}, {0.7, 1.0}}, {0.5, -0.5},
                                                      {0.0, 0.0});
        const double c1 = lrg_constant(spec, ZGrid::for_spec(spec, 16, 16));
        CHECK(c1 == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("non-normal two-atom spec exceeds 1") {
        const auto spec = testing::two_atom_spec();
        const double c1 = lrg_constant(spec, ZGrid::for_spec(spec, 24, 24));
        CHECK(c1 > 1.0 + 1e-3);
    }
    CHECK_THROWS_AS((void)lrg_constant(testing::one_atom_spec(), ZGrid{}), InputError);
}

TEST_CASE("utb constants") {
    const ZGrid fine = ZGrid::make(-1.0, 1.0, 1e-2, 1e2, 41, 41);
    SUBCASE("one-atom spec: sup is 1 near z = i") {
        const double c2 = utb_constant_trace(testing::one_atom_spec(), fine);
        CHECK(c2 == doctest::Approx(1.0).epsilon(1e-6));  // grid hits z = i exactly
        CHECK(c2 <= 1.0 + 1e-9);                          // rank-one bound
    }
    SUBCASE("k = 0 gives 0") {
        const auto spec = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {1.0}, {0.0});
        CHECK(utb_constant_trace(spec, fine) <= 1e-12);
        CHECK(utb_constant_integral(spec, fine) <= 1e-12);
    }
    SUBCASE("route agreement on commuting atomic specs") {
        for (unsigned seed = 0; seed < 4; ++seed) {
            const auto spec = testing::random_commuting_spec(1400 + seed, 6);
            const ZGrid grid = ZGrid::for_spec(spec, 12, 10);
            const double a = utb_constant_trace(spec, grid);
            const double b = utb_constant_integral(spec, grid);
            CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, std::max(a, b)));
        }
    }
}

TEST_CASE("c3_constant") {
    const ZGrid fine = ZGrid::make(-1.0, 1.0, 1e-2, 1e2, 33, 33);
    SUBCASE("k = 0: S = I, empty spectrum, constant 1") {
        const auto spec = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {1.0}, {0.0});
        const C3Result res = c3_constant(spec, fine);
        CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(res.skipped == 0);
    }
    SUBCASE("one-atom spec: Blaschke infimum cancels the blowup exactly") {
        const C3Result res = c3_constant(testing::one_atom_spec(), fine);
        CHECK(res.value == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("lebesgue spec with bounded density: finite") {
        const auto spec = testing::lebesgue_identity_spec(96);
        const ZGrid grid = ZGrid::make(-0.5, 1.5, 1e-2, 1e2, 9, 9);
        const C3Result res = c3_constant(spec, grid);
        CHECK(res.value <= 25.0);  // sing/outer part bounded below by e^{-pi}
    }
}

TEST_CASE("carleson_sup") {
    SUBCASE("single point at i: maximum 1/4 at z = i") {
        const ZGrid fine = ZGrid::make(-1.0, 1.0, 1e-2, 1e2, 41, 41);
        CHECK(carleson_sup({cxd(0.0, 1.0)}, fine) == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("geometric ladder is truncation-stable") {
        const double s10 = carleson_sup(geometric_ladder(10), grid_for_points(geometric_ladder(10)));
        const double s20 = carleson_sup(geometric_ladder(20), grid_for_points(geometric_ladder(20)));
        CHECK(s20 <= 1.10 * s10);
        CHECK(s20 <= 2.0);
    }
    SUBCASE("accumulating cluster grows") {
        const double s50 = carleson_sup(accumulating_cluster(50),
                                        grid_for_points(accumulating_cluster(50)));
        const double s200 = carleson_sup(accumulating_cluster(200),
                                         grid_for_points(accumulating_cluster(200)));
        CHECK(s200 >= 1.5 * s50);
    }
}

TEST_CASE("carleson_square") {
    SUBCASE("single point: ratio 2 at h = 1/2") {
        CHECK(carleson_square({cxd(0.0, 1.0)}) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("empty set") { CHECK(carleson_square({}) == 0.0); }
    SUBCASE("square test tracks the kernel test (Theorem 1.4)") {
        const double sq50 = carleson_square(accumulating_cluster(50));
        const double sq200 = carleson_square(accumulating_cluster(200));
        CHECK(sq200 >= 1.5 * sq50);
        const double lq10 = carleson_square(geometric_ladder(10));
        const double lq20 = carleson_square(geometric_ladder(20));
        CHECK(lq20 <= 1.10 * lq10);
    }
}

TEST_CASE("sparse_constant and decomposition") {
    SUBCASE("pair {i, 2i}") {
        const SparseResult r = sparse_constant({cxd(0, 1), cxd(0, 2)});
        CHECK(r.constant == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK_FALSE(r.has_duplicates);
    }
    SUBCASE("single point: +inf, one class") {
        const SparseResult r = sparse_constant({cxd(0, 1)});
        CHECK(std::isinf(r.constant));
        CHECK(n_sparse_decompose({cxd(0, 1)}, 0.1) == 1);
    }
    SUBCASE("near-coincident pair: not sparse, two classes at eps = 0.1") {
        const std::vector<cxd> pts{cxd(0, 1), cxd(0, 1.0 + 1e-9)};
        const SparseResult r = sparse_constant(pts);
        CHECK(r.constant <= 1e-8);
        CHECK(n_sparse_decompose(pts, 0.1) == 2);
    }
    SUBCASE("exact duplicates give 0 and are flagged") {
        const SparseResult r = sparse_constant({cxd(0, 1), cxd(0, 1)});
        CHECK(r.constant == 0.0);
        CHECK(r.has_duplicates);
    }
}

TEST_CASE("nu_c_density") {
    SUBCASE("identity push-forward has density 1, stable") {
        const auto res = nu_c_density(testing::lebesgue_identity_spec(512), 64);
        CHECK(res.sup == doctest::Approx(1.0).epsilon(0.05));
        CHECK(res.flag == Boundedness::bounded);
        CHECK(res.growth <= 1.5);
    }
    SUBCASE("square push-forward is flagged unbounded") {
        const auto res = nu_c_density(testing::lebesgue_square_spec(512), 64);
        CHECK(res.flag == Boundedness::unbounded);
        CHECK(res.growth >= 2.0);
    }
    SUBCASE("k = 0: zero measure") {
        const auto spec = OperatorSpec::from_functions(
            Measure::lebesgue(32), 1, 1, [](double x) { return Mat::Constant(1, 1, cxd(x, 0)); },
            [](double) { return Mat::Zero(1, 1); });
        const auto res = nu_c_density(spec, 32);
        CHECK(res.sup == 0.0);
        CHECK(res.flag == Boundedness::bounded);
    }
    SUBCASE("atomic spec: inapplicable") {
        CHECK(nu_c_density(testing::one_atom_spec(), 32).flag == Boundedness::inapplicable);
    }
}

TEST_CASE("nu_dh_sup") {
    SUBCASE("single atom with unit mass point: sup 4 at (0, 1/4)") {
        const auto spec = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {0.0}, {1.0});
        CHECK(nu_dh_sup(spec) == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(nu_dh_sup(spec, {0.25}, {0.0}) == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("no atoms: 0") {
        CHECK(nu_dh_sup(testing::lebesgue_identity_spec(32)) == 0.0);
    }
    SUBCASE("cluster grows with truncation") {
        auto cluster_spec = [](int n) {
            std::vector<Atom> atoms;
            std::vector<cxd> alphas, cs;
            for (int k = 1; k <= n; ++k) {
                atoms.push_back({static_cast<double>(k) / (n + 1), 1.0});
                alphas.push_back(0.0);
                cs.push_back(std::sqrt(2.0) / k);  // mu kappa^2 = 2/k^2
            }
            return OperatorSpec::scalar_atomic(std::move(atoms), std::move(alphas), std::move(cs));
        };
        const double s20 = nu_dh_sup(cluster_spec(20));
        const double s80 = nu_dh_sup(cluster_spec(80));
        CHECK(s80 >= 2.0 * s20);
    }
}

TEST_CASE("nu_h_sup") {
    SUBCASE("pure continuous identity: interval ratio 2") {
        CHECK(nu_h_sup(testing::lebesgue_identity_spec(512)) ==
              doctest::Approx(2.0).epsilon(0.05));
    }
    SUBCASE("pure single atom: 4") {
        const auto spec = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {0.0}, {1.0});
        CHECK(nu_h_sup(spec) == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("subadditivity of the combined ratio") {
        const auto combined = OperatorSpec::from_functions(
            Measure::from_density({{0.5, 1.0}}, [](double) { return 1.0; }, 256), 1, 1,
            [](double x) { return Mat::Constant(1, 1, cxd(x, 0)); },
            [](double) { return Mat::Ones(1, 1); });
        const double both = nu_h_sup(combined);
        const auto atom_only = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {0.5}, {1.0});
        CHECK(both <= nu_h_sup(atom_only) + nu_h_sup(testing::lebesgue_identity_spec(256)) + 1e-9);
    }
}

TEST_CASE("sing_outer_bound") {
    SUBCASE("nu_c = 0: infimum 1") {
        const auto spec = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {0.0}, {1.0});
        CHECK(sing_outer_bound(spec, ZGrid::for_spec(spec, 8, 8)) == doctest::Approx(1.0));
    }
    SUBCASE("identity spec at z = i reproduces e^{-pi/4}") {
        const auto spec = testing::lebesgue_identity_spec(512);
        const ZGrid single = ZGrid::make(0.0, 0.0, 1.0, 1.0, 1, 1);
        const double inf = sing_outer_bound(spec, single);
        CHECK(inf == doctest::Approx(std::exp(-M_PI / 4.0)).epsilon(1e-6));
        const cxd det = det_char_fn(spec, cxd(0.0, 1.0));
        CHECK(std::abs(det) == doctest::Approx(inf).epsilon(1e-6));
    }
    SUBCASE("square push-forward decays under grid refinement near 0") {
        const auto spec = testing::lebesgue_square_spec(512);
        const double coarse =
            sing_outer_bound(spec, ZGrid::make(0.0, 1.0, 1e-2, 1.0, 9, 9));
        const double fine =
            sing_outer_bound(spec, ZGrid::make(0.0, 1.0, 1e-5, 1.0, 9, 33));
        CHECK(fine < coarse);
        CHECK(fine < 0.05);
    }
}

TEST_CASE("Corollary 2.9 direction: (2.12) bounds the trace constant") {
    for (unsigned seed = 0; seed < 3; ++seed) {
        const auto spec = testing::random_commuting_spec(1500 + seed, 6);
        const ZGrid grid = ZGrid::for_spec(spec, 12, 12);
        const double c2 = utb_constant_integral(spec, grid);
        const double poisson = nu_c_poisson_sup(spec, grid);
        const double kernel = carleson_sup(atom_eigenvalues(spec).points(), grid);
        CHECK(c2 <= 2.0 * (poisson + 2.0 * kernel) + 1e-9);
    }
}

TEST_CASE("Theorem 1.6 direction on atomic specs") {
    // When C1 and C2 stay small across the grid, the point spectrum is
    // Carleson-stable across truncations.
    for (unsigned seed = 0; seed < 3; ++seed) {
        const auto spec = testing::random_commuting_spec(1600 + seed, 10);
        const ZGrid grid = ZGrid::for_spec(spec, 12, 12);
        if (lrg_constant(spec, grid) < 10.0 && utb_constant_trace(spec, grid) < 10.0) {
            auto pts = atom_eigenvalues(spec).points();
            const double full = carleson_sup(pts, grid);
            pts.resize((pts.size() + 1) / 2);
            const double half = carleson_sup(pts, grid);
            CHECK(full <= 4.0 * std::max(half, 0.25));
        }
    }
}

TEST_CASE("Remark 1.5 on constructed families") {
    // A union of N well-separated sparse ladders is N-sparse and Carleson.
    std::vector<cxd> two_ladders;
    for (int k = 0; k <= 8; ++k) {
        two_ladders.emplace_back(0.0, std::pow(2.0, k));
        two_ladders.emplace_back(0.0, std::pow(2.0, k) * (1.0 + 1e-6));  // collides pairwise
    }
    CHECK(sparse_constant(two_ladders).constant <= 1e-5);      // not 1-sparse
    CHECK(n_sparse_decompose(two_ladders, 0.1) == 2);          // but 2-sparse
    const double sup = carleson_sup(two_ladders, grid_for_points(two_ladders));
    CHECK(sup <= 4.0);  // still Carleson
}

TEST_CASE("verdicts") {
    CriteriaOptions fast;
    fast.grid_nx = 12;
    fast.grid_ny = 12;
    SUBCASE("one-atom scalar spec: Theorem-2.6 style verdict holds") {
        const CriteriaReport rep = evaluate_criteria(testing::one_atom_spec(), fast);
        CHECK(rep.verdict_2_6 == Verdict::holds);
        CHECK(rep.verdict_2_5 == Verdict::holds);
    }
    SUBCASE("accumulating cluster fails") {
        std::vector<Atom> atoms;
        std::vector<cxd> alphas, cs;
        const int n = 60;
        for (int k = 1; k <= n; ++k) {
            atoms.push_back({static_cast<double>(k) / (n + 1), 1.0});
            alphas.push_back(0.0);
            cs.push_back(std::sqrt(2.0) / k);
        }
        const auto spec =
            OperatorSpec::scalar_atomic(std::move(atoms), std::move(alphas), std::move(cs));
        CriteriaOptions opt = fast;
        opt.with_constants = false;
        const CriteriaReport rep = evaluate_criteria(spec, opt);
        CHECK(rep.verdict_2_6 == Verdict::fails);
    }
    SUBCASE("k = 0: trivially similar, everything passes") {
        const auto spec = OperatorSpec::scalar_atomic({{0.5, 1.0}}, {1.0}, {0.0});
        const CriteriaReport rep = evaluate_criteria(spec, fast);
        CHECK(rep.verdict_2_5 == Verdict::holds);
        CHECK(rep.verdict_2_6 == Verdict::holds);
    }
    SUBCASE("non-commuting spec: inapplicable") {
        const auto spec = testing::random_atomic_spec(1700, 5);
        CriteriaOptions opt = fast;
        opt.with_constants = false;
        const CriteriaReport rep = evaluate_criteria(spec, opt);
        CHECK(rep.verdict_2_5 == Verdict::inapplicable);
        CHECK(rep.verdict_2_6 == Verdict::inapplicable);
    }
}
