#include "kants/grid.hpp"

#include "kants/dataset.hpp"
#include "kants/text.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace kants;

TEST_CASE("init_random")
{
    SUBCASE("deterministic per seed")
    {
        const auto a = Grid::random({10, 10}, 4, 123);
        const auto b = Grid::random({10, 10}, 4, 123);
        const auto c = Grid::random({10, 10}, 4, 124);
        CHECK(a == b);
        CHECK_FALSE(a == c);
    }
    SUBCASE("components in [0,1], initial copy equals current")
    {
        const auto g = Grid::random({10, 10}, 4, 5);
        for (double v : g.raw_cells()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(g.raw_cells() == g.raw_initial());
    }
    SUBCASE("3x3 with one variable")
    {
        const auto g = Grid::random({3, 3}, 1, 1);
        CHECK(g.cell_count() == 9);
        CHECK(g.cell(CellCoord{2, 2}).size() == 1);
    }
    SUBCASE("degenerate dimensions are rejected")
    {
        CHECK_THROWS_AS(Grid::random({2, 5}, 1, 1), std::invalid_argument);
        CHECK_THROWS_AS(Grid::random({5, 2}, 1, 1), std::invalid_argument);
        CHECK_THROWS_AS(Grid::random({5, 5}, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("grid dims helpers")
{
    const GridDims d{7, 5};
    CHECK(d.cells() == 35);
    CHECK(d.coord(d.index({3, 4})) == CellCoord{3, 4});
    CHECK(d.wrap(-1, -1) == CellCoord{6, 4});
    CHECK(d.wrap(7, 5) == CellCoord{0, 0});
    CHECK(d.wrap(-15, 11) == CellCoord{6, 1});
    CHECK(d.max_radius() == 2);
    CHECK(default_grid_side(4) == 10);
    CHECK(default_grid_side(75) == 18);
    CHECK(default_grid_side(135) == 24);
    CHECK(default_grid_side(384) == 40);
}

TEST_CASE("neighborhood_cells")
{
    SUBCASE("radius 1 on 10x10 gives the eight surrounding cells")
    {
        const auto n = neighborhood_cells({5, 5}, 1, {10, 10});
        CHECK(n.size() == 8);
        CHECK(std::find(n.begin(), n.end(), CellCoord{5, 5}) == n.end());
        for (const auto& c : n) {
            CHECK(std::abs(c.x - 5) <= 1);
            CHECK(std::abs(c.y - 5) <= 1);
        }
    }
    SUBCASE("wraps around the torus")
    {
        const auto n = neighborhood_cells({0, 0}, 1, {5, 5});
        CHECK(std::find(n.begin(), n.end(), CellCoord{4, 4}) != n.end());
        CHECK(std::find(n.begin(), n.end(), CellCoord{4, 0}) != n.end());
        CHECK(std::find(n.begin(), n.end(), CellCoord{0, 4}) != n.end());
    }
    SUBCASE("radius 2 gives 24 distinct cells")
    {
        const auto n = neighborhood_cells({1, 1}, 2, {5, 5});
        CHECK(n.size() == 24);
        CHECK(std::set<CellCoord>(n.begin(), n.end()).size() == 24);
    }
    SUBCASE("enumeration order is row by row in offset order")
    {
        const auto n = neighborhood_cells({5, 5}, 1, {10, 10});
        CHECK(n.front() == CellCoord{4, 4});
        CHECK(n[1] == CellCoord{5, 4});
        CHECK(n[3] == CellCoord{4, 5});
        CHECK(n.back() == CellCoord{6, 6});
    }
    SUBCASE("invalid radii")
    {
        CHECK_THROWS_AS(neighborhood_cells({0, 0}, 0, {10, 10}), std::invalid_argument);
        CHECK_THROWS_AS(neighborhood_cells({0, 0}, 3, {5, 10}), std::invalid_argument);
        CHECK_NOTHROW(neighborhood_cells({0, 0}, 2, {5, 10}));
    }
}

TEST_CASE("centroid")
{
    const auto g = Grid::random({6, 5}, 3, 9);
    SUBCASE("cr = 0 is the cell itself")
    {
        const auto c = g.centroid({2, 3}, 0);
        CHECK(std::equal(c.begin(), c.end(), g.cell(CellCoord{2, 3}).begin()));
    }
    SUBCASE("uniform grid gives its value for any radius")
    {
        const std::vector<double> v{0.25, 0.5, 0.75};
        const auto u = Grid::uniform({7, 7}, v);
        for (int cr = 0; cr <= 3; ++cr) {
            const auto c = u.centroid({1, 6}, cr);
            for (std::size_t k = 0; k < v.size(); ++k)
                CHECK(c[k] == doctest::Approx(v[k]).epsilon(1e-15));
        }
    }
    SUBCASE("3x3, cr = 1: every center sees all nine cells")
    {
        const auto small = Grid::random({3, 3}, 2, 4);
        std::vector<double> sum(2, 0.0);
        for (int i = 0; i < 9; ++i)
            for (int k = 0; k < 2; ++k)
                sum[k] += small.cell(static_cast<std::size_t>(i))[k];
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 3; ++x) {
                const auto c = small.centroid({x, y}, 1);
                CHECK(c[0] == doctest::Approx(sum[0] / 9.0).epsilon(1e-14));
                CHECK(c[1] == doctest::Approx(sum[1] / 9.0).epsilon(1e-14));
            }
    }
    SUBCASE("radius too large for the grid")
    {
        CHECK_THROWS_AS(g.centroid({0, 0}, 3), std::invalid_argument);
        CHECK_THROWS_AS(g.centroid_field(3), std::invalid_argument);
    }
}

TEST_CASE("update_cell")
{
    SUBCASE("cell equal to the ant: R = 1, no change")
    {
        const std::vector<double> v{0.3, 0.6};
        auto g = Grid::uniform({3, 3}, v);
        const double r = g.update_cell({1, 1}, v, 1.0, 0);
        CHECK(r == 1.0);
        CHECK(g.cell(CellCoord{1, 1})[0] == 0.3);
        CHECK(g.cell(CellCoord{1, 1})[1] == 0.6);
    }
    SUBCASE("maximal distance: R = 0, no change")
    {
        auto g = Grid::uniform({3, 3}, std::vector<double>{0.0, 0.0});
        const double r = g.update_cell({0, 0}, std::vector<double>{1.0, 1.0}, 1.0, 0);
        CHECK(r == 0.0);
        CHECK(g.cell(CellCoord{0, 0})[0] == 0.0);
    }
    SUBCASE("alpha 0.5, cell 0, ant 0.5: R = 0.25, new cell 0.125")
    {
        auto g = Grid::uniform({3, 3}, std::vector<double>{0.0});
        const double r = g.update_cell({2, 0}, std::vector<double>{0.5}, 0.5, 0);
        CHECK(r == doctest::Approx(0.25));
        CHECK(g.cell(CellCoord{2, 0})[0] == doctest::Approx(0.125));
        CHECK(g.cell(CellCoord{1, 0})[0] == 0.0);
    }
    SUBCASE("D uses the centroid, not the cell")
    {
        // Cell (1,1) holds the ant's value but its 3x3 block averages 1/9 of it.
        auto g = Grid::uniform({3, 3}, std::vector<double>{0.0});
        g.set_cell({1, 1}, std::vector<double>{0.9});
        const double r = g.update_cell({1, 1}, std::vector<double>{0.9}, 1.0, 1);
        CHECK(r == doctest::Approx(1.0 - (0.9 - 0.1)));
    }
    SUBCASE("initial vectors never change")
    {
        auto g = Grid::random({4, 4}, 2, 2);
        const auto initial = g.raw_initial();
        g.update_cell({1, 2}, std::vector<double>{0.9, 0.1}, 1.0, 1);
        g.evaporate(0.3);
        CHECK(g.raw_initial() == initial);
    }
    SUBCASE("wrong ant length")
    {
        auto g = Grid::random({3, 3}, 2, 2);
        CHECK_THROWS_AS(g.update_cell({0, 0}, std::vector<double>{0.5}, 1.0, 0), std::invalid_argument);
    }
}

TEST_CASE("evaporate")
{
    SUBCASE("cells at their initial value stay put")
    {
        auto g = Grid::random({4, 4}, 2, 8);
        const auto before = g.raw_cells();
        g.evaporate(0.37);
        CHECK(g.raw_cells() == before);
    }
    SUBCASE("rho = 1 restores the initial field exactly")
    {
        auto g = Grid::random({4, 4}, 2, 8);
        g.set_cell({1, 1}, std::vector<double>{0.123, 0.987});
        g.evaporate(1.0);
        CHECK(g.raw_cells() == g.raw_initial());
    }
    SUBCASE("rho = 0.5 halves the way")
    {
        auto g = Grid::uniform({3, 3}, std::vector<double>{0.0});
        g.set_cell({0, 0}, std::vector<double>{1.0});
        g.evaporate(0.5);
        CHECK(g.cell(CellCoord{0, 0})[0] == 0.5);
    }
    SUBCASE("rho = 0 is a no-op")
    {
        auto g = Grid::uniform({3, 3}, std::vector<double>{0.0});
        g.set_cell({0, 0}, std::vector<double>{0.7});
        g.evaporate(0.0);
        CHECK(g.cell(CellCoord{0, 0})[0] == 0.7);
    }
    SUBCASE("rate outside [0,1]")
    {
        auto g = Grid::uniform({3, 3}, std::vector<double>{0.0});
        CHECK_THROWS_AS(g.evaporate(-0.1), std::invalid_argument);
        CHECK_THROWS_AS(g.evaporate(1.5), std::invalid_argument);
    }
}

TEST_CASE("grid export format")
{
    SUBCASE("2x2 with one variable: header plus four rows")
    {
        Grid g({2, 2}, 1, {0.1, 0.2, 0.3, 0.4}, {0.5, 0.6, 0.7, 0.8});
        const auto s = grid_to_string(g);
        const auto rows = text::lines(s);
        REQUIRE(rows.size() == 5);
        CHECK(rows[0] == "kants-grid,2,2,1,1");
        CHECK(rows[1] == "0,0,0.1,0.5");
        CHECK(rows[4] == "1,1,0.4,0.8");
    }
    SUBCASE("corrupted files report the offending line")
    {
        const std::string good = "kants-grid,2,2,1,1\n0,0,0.1,0.5\n1,0,0.2,0.6\n0,1,0.3,0.7\n1,1,0.4,0.8\n";
        CHECK_NOTHROW(grid_from_string(good));
        auto expect_line = [](const std::string& content, std::size_t line) {
            try {
                grid_from_string(content, "g.csv");
                FAIL("expected a parse error");
            } catch (const ParseError& e) {
                CHECK(e.line() == line);
            }
        };
        expect_line("kants-grid,2,2\n", 1);
        expect_line("kants-grid,2,2,1,9\n0,0,0.1,0.5\n", 1);
        expect_line("kants-grid,2,2,1,1\n0,0,0.1,0.5\n1,0,oops,0.6\n", 3);
        expect_line("kants-grid,2,2,1,1\n0,0,0.1,0.5\n0,0,0.1,0.5\n", 3);
        expect_line("kants-grid,2,2,1,1\n0,0,0.1,0.5\n1,0,0.2\n", 3);
        expect_line("kants-grid,2,2,1,1\n0,0,0.1,0.5\n5,0,0.2,0.6\n", 3);
        expect_line("kants-grid,2,2,1,1\n0,0,0.1,0.5\n1,0,0.2,0.6\n", 3);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(import_grid("/no/such/grid.csv"), std::runtime_error);
    }
}

TEST_CASE("distance helpers")
{
    const std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(euclidean(a, b) == 5.0);
    CHECK(mean_abs_difference(a, b) == 3.5);
    CHECK(mean_abs_difference(std::vector<double>{}, std::vector<double>{}) == 0.0);
}
