// test_measure.cpp
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dissop/measure.hpp"
#include "test_specs.hpp"

using namespace dissop;

TEST_CASE("phi on reference measures") {
    const Measure leb = Measure::lebesgue(512);
    CHECK(leb.phi(0.5) == doctest::Approx(0.5).epsilon(1e-12));

    const Measure atom0 = Measure::from_atoms({{0.0, 1.0}});
    CHECK(atom0.phi(0.0) == doctest::Approx(0.5).epsilon(1e-14));

    // atom mass 2 at 0.3 plus Lebesgue: mu([0,0.3)) + half mass = 0.3 + 1
    const Measure mixed = Measure::from_density({{0.3, 2.0}}, [](double) { return 1.0; }, 512);
    CHECK(mixed.phi(0.3) == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(mixed.total_mass() == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)leb.phi(-0.1), std::domain_error);
    CHECK_THROWS_AS((void)leb.phi(1.1), std::domain_error);
}

TEST_CASE("psi on reference measures") {
    const Measure leb = Measure::lebesgue(512);
    CHECK(leb.psi(0.25) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(leb.psi(leb.total_mass()) == doctest::Approx(1.0));

    const Measure mixed = Measure::from_density({{0.3, 2.0}}, [](double) { return 1.0; }, 512);
    CHECK(mixed.psi(0.5) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(mixed.psi(1.0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(mixed.psi(2.2) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(mixed.psi(mixed.total_mass()) == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)leb.psi(-0.1), std::domain_error);
    CHECK_THROWS_AS((void)leb.psi(1.5), std::domain_error);
}

TEST_CASE("star grid partitions [0,M]") {
    SUBCASE("single atom") {
        const StarGrid grid = build_star_grid(Measure::from_atoms({{0.5, 1.0}}));
        REQUIRE(grid.segments().size() == 1);
        CHECK(grid.atom_intervals().size() == 1);
        CHECK(grid.atom_intervals()[0].t_lo == 0.0);
        CHECK(grid.atom_intervals()[0].t_hi == 1.0);
        CHECK(grid.atom_intervals()[0].x == 0.5);
    }
    SUBCASE("lebesgue only") {
        const StarGrid grid = build_star_grid(Measure::lebesgue(512));
        REQUIRE(grid.segments().size() == 1);
        CHECK_FALSE(grid.segments()[0].is_atom);
        CHECK(grid.stretches()[0].t_lo == 0.0);
        CHECK(grid.stretches()[0].t_hi == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(grid.stretches()[0].cells.size() == 512);
    }
    SUBCASE("atom plus lebesgue") {
        const Measure m = Measure::from_density({{0.3, 2.0}}, [](double) { return 1.0; }, 512);
        const StarGrid grid = build_star_grid(m);
        REQUIRE(grid.segments().size() == 3);
        CHECK_FALSE(grid.segments()[0].is_atom);
        CHECK(grid.segments()[1].is_atom);
        CHECK_FALSE(grid.segments()[2].is_atom);
        CHECK(grid.segments()[0].t_hi == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(grid.segments()[1].t_lo == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(grid.segments()[1].t_hi == doctest::Approx(2.3).epsilon(1e-12));
        CHECK(grid.segments()[2].t_hi == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("atom interval lengths equal atom masses exactly") {
    testing::Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto atoms = rng.random_atoms(rng.uniform_int(1, 12));
        const Measure m = Measure::from_atoms(atoms);
        const StarGrid grid = build_star_grid(m);
        double total = 0.0;
        for (const auto& iv : grid.atom_intervals()) {
            CHECK(iv.mass == atoms[static_cast<std::size_t>(iv.atom_index)].mass);
            CHECK(std::abs((iv.t_hi - iv.t_lo) - iv.mass) <= 1e-15 * m.total_mass());
            total += iv.mass;
        }
        CHECK(total == doctest::Approx(m.total_mass()).epsilon(1e-12));
    }
}

TEST_CASE("psi of phi is the identity at continuity points") {
    const Measure m =
        Measure::from_density({{0.3, 2.0}, {0.7, 0.5}}, [](double x) { return 1.0 + x; }, 256);
    for (double x : {0.1, 0.25, 0.5, 0.65, 0.9}) {
        CHECK(m.psi(m.phi(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    // phi_*(t) = t wherever mu({psi(t)}) = 0
    for (double t : {0.05, 0.2, 2.5, 3.1}) {
        if (m.atom_mass_at(m.psi(t)) == 0.0)
            CHECK(m.phi(m.psi(t)) == doctest::Approx(t).epsilon(1e-12));
    }
}

TEST_CASE("change of variables: both sides agree") {
    SUBCASE("f = 1, lebesgue, x = 1") {
        const Measure m = Measure::lebesgue(128);
        std::vector<cxd> fc(m.cells().size(), 1.0);
        const auto [left, right] = star_integral(m, {}, fc, 1.0);
        CHECK(std::abs(left - 1.0) <= 1e-12);
        CHECK(std::abs(right - 1.0) <= 1e-12);
    }
    SUBCASE("f = 1, single atom mass 2 at 0.5, x = 0.5") {
        const Measure m = Measure::from_atoms({{0.5, 2.0}});
        const auto [left, right] = star_integral(m, {1.0}, {}, 0.5);
        CHECK(std::abs(left - 1.0) <= 1e-14);   // phi(0.5) = 1: half the interval
        CHECK(std::abs(right - 1.0) <= 1e-14);  // half-mass convention
    }
    SUBCASE("f(s) = s, atom mass 2 at 0.3 plus lebesgue, x = 0.3") {
        const Measure m = Measure::from_density({{0.3, 2.0}}, [](double) { return 1.0; }, 512);
        std::vector<cxd> fc;
        for (const auto& c : m.cells()) fc.emplace_back(c.x, 0.0);
        const auto [left, right] = star_integral(m, {cxd(0.3, 0.0)}, fc, 0.3);
        CHECK(std::abs(left - right) <= 1e-12);
        CHECK(std::abs(right - 0.345) <= 1e-5);  // int_0^0.3 s ds + 1/2*2*0.3, midpoint rule
    }
}

TEST_CASE("change of variables property over random measures") {
    testing::Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        Measure m = trial % 2 == 0
                        ? Measure::from_atoms(rng.random_atoms(rng.uniform_int(1, 10)))
                        : Measure::from_density(rng.random_atoms(rng.uniform_int(0, 4)),
                                                [&](double x) { return 0.5 + x * x; }, 64);
        std::vector<cxd> fa, fc;
        for (std::size_t i = 0; i < m.atoms().size(); ++i) fa.push_back(rng.cgauss());
        for (std::size_t i = 0; i < m.cells().size(); ++i) fc.push_back(rng.cgauss());
        const double x = rng.uniform(0.0, 1.0);
        const auto [left, right] = star_integral(m, fa, fc, x);
        const double tol = m.cells().empty() ? 1e-10 : 1e-6;
        CHECK(std::abs(left - right) <= tol * std::max(1.0, std::abs(right)));
    }
}

TEST_CASE("measure input validation") {
    CHECK_THROWS_AS(Measure::from_atoms({{0.5, 0.0}}), InputError);
    CHECK_THROWS_AS(Measure::from_atoms({{0.5, 1.0}, {0.5, 1.0}}), InputError);
    CHECK_THROWS_AS(Measure::from_atoms({{0.7, 1.0}, {0.3, 1.0}}), InputError);
    CHECK_THROWS_AS(Measure::from_atoms({{1.5, 1.0}}), InputError);
    // mismatched samples
    const Measure m = Measure::from_atoms({{0.5, 1.0}});
    CHECK_THROWS_AS(star_integral(m, {}, {}, 0.5), InputError);
}

TEST_CASE("nodes are moved off atoms") {
    const Measure m = Measure::from_nodes({{0.5, 1.0}}, {0.25, 0.5, 0.75}, {0.1, 0.1, 0.1});
    for (const auto& c : m.cells()) CHECK(c.x != 0.5);
    CHECK(m.total_mass() == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("phi is nondecreasing") {
    testing::Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const Measure m = Measure::from_density(rng.random_atoms(rng.uniform_int(0, 5)),
                                                [&](double x) { return 0.1 + x; }, 64);
        double prev = -1.0;
        for (int i = 0; i <= 200; ++i) {
            const double v = m.phi(i / 200.0);
            CHECK(v >= prev);
            prev = v;
        }
    }
}
