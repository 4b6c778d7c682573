#include "kants/snapshot.hpp"

#include "helpers.hpp"
#include "kants/text.hpp"

#include <doctest.h>

#include <sstream>

using namespace kants;

TEST_CASE("history text format")
{
    const std::vector<HistoryRow> rows{{0, 0, "a", {1, 2}}, {0, 1, "b", {3, 0}}, {10, 0, "a", {2, 2}}};
    const auto s = history_to_string({4, 3}, rows);
    CHECK(s.starts_with("kants-history,4,3,1\niteration,ant_id,label,x,y\n0,0,a,1,2\n"));

    const auto h = history_from_string(s);
    CHECK(h.dims == GridDims{4, 3});
    REQUIRE(h.rows.size() == 3);
    CHECK(h.rows[2].iteration == 10);
    CHECK(h.rows[1].label == "b");
    CHECK(h.rows[1].position == CellCoord{3, 0});
    CHECK(h.iterations() == std::vector<int>{0, 10});
    CHECK(h.labels() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("history parse errors")
{
    auto line_of = [](const std::string& content) -> std::size_t {
        try {
            history_from_string(content, "h.csv");
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("") == 1);
    CHECK(line_of("kants-history,4,3,1\n") == 1);
    CHECK(line_of("kants-history,4,3,2\niteration,ant_id,label,x,y\n") == 1);
    CHECK(line_of("kants-history,4,3,1\nwrong\n") == 2);
    CHECK(line_of("kants-history,4,3,1\niteration,ant_id,label,x,y\n0,0,a,1\n") == 3);
    CHECK(line_of("kants-history,4,3,1\niteration,ant_id,label,x,y\n0,0,a,1,2\n0,1,a,9,2\n") == 4);
    CHECK(line_of("kants-history,4,3,1\niteration,ant_id,label,x,y\n0,x,a,1,2\n") == 3);
    CHECK(line_of("kants-history,4,3,1\niteration,ant_id,label,x,y\n") == 0);
}

TEST_CASE("merging histories")
{
    History a{{4, 4}, {{0, 0, "a", {0, 0}}}};
    History b{{4, 4}, {{5, 0, "a", {1, 0}}}};
    const auto m = merge_histories({a, b});
    CHECK(m.rows.size() == 2);
    CHECK(m.iterations() == std::vector<int>{0, 5});
    History c{{5, 4}, {}};
    CHECK_THROWS_AS(merge_histories({a, c}), std::invalid_argument);
}

TEST_CASE("PPM rendering")
{
    SUBCASE("a hand-checked 2x1 image")
    {
        // Class 1 on cell (1,0), nothing on (0,0); one pixel per cell.
        const auto ppm = render_ppm({2, 1}, {{1, 0}}, {1}, 1);
        const auto c = class_color(1);
        CHECK(ppm == "P3\n2 1\n255\n255 255 255 " + std::to_string(c[0]) + " " + std::to_string(c[1]) + " " +
                         std::to_string(c[2]) + "\n");
    }
    SUBCASE("majority colour per cell, lower class on ties")
    {
        const auto ppm = render_ppm({2, 1}, {{0, 0}, {0, 0}, {0, 0}, {1, 0}, {1, 0}}, {2, 2, 0, 3, 1}, 1);
        const auto c2 = class_color(2);
        const auto c1 = class_color(1);
        const auto expected = "P3\n2 1\n255\n" + std::to_string(c2[0]) + " " + std::to_string(c2[1]) + " " +
                              std::to_string(c2[2]) + " " + std::to_string(c1[0]) + " " + std::to_string(c1[1]) +
                              " " + std::to_string(c1[2]) + "\n";
        CHECK(ppm == expected);
    }
    SUBCASE("cell blocks and short lines")
    {
        const auto ppm = render_ppm({3, 2}, {}, {}, 4);
        const auto rows = text::lines(ppm);
        CHECK(rows[0] == "P3");
        CHECK(rows[1] == "12 8");
        CHECK(rows[2] == "255");
        for (std::size_t i = 3; i < rows.size(); ++i)
            CHECK(rows[i].size() <= 70);
        // 12 x 8 pixels, three numbers each, separated by single blanks.
        std::size_t numbers = 0;
        for (std::size_t i = 3; i < rows.size(); ++i) {
            std::istringstream in{std::string(rows[i])};
            for (int v; in >> v;) {
                CHECK(v == 255);
                ++numbers;
            }
        }
        CHECK(numbers == 12 * 8 * 3);
    }
    SUBCASE("palette colours are distinct")
    {
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = i + 1; j < 10; ++j)
                CHECK(class_color(i) != class_color(j));
        CHECK(class_color(0) != Rgb{255, 255, 255});
    }
    SUBCASE("argument checks")
    {
        CHECK_THROWS_AS(render_ppm({2, 2}, {{0, 0}}, {}, 1), std::invalid_argument);
        CHECK_THROWS_AS(render_ppm({2, 2}, {}, {}, 0), std::invalid_argument);
    }
}

TEST_CASE("rendering a history")
{
    const auto dir = test::scratch_dir("render");
    SUBCASE("one image per iteration")
    {
        History h{{3, 3}, {{0, 0, "x", {0, 0}}, {0, 1, "y", {1, 1}}, {50, 0, "x", {2, 2}}, {50, 1, "y", {2, 2}},
                           {100, 0, "x", {0, 1}}, {100, 1, "y", {0, 1}}, {150, 0, "x", {1, 2}}, {150, 1, "y", {0, 2}}}};
        const auto files = render_history(h, dir, 2);
        REQUIRE(files.size() == 4);
        CHECK(files[0].filename() == "snapshot-000000.ppm");
        CHECK(files[3].filename() == "snapshot-000150.ppm");
        CHECK(text::read_file(files[1].string()).starts_with("P3\n6 6\n255\n"));
    }
    SUBCASE("empty history writes nothing")
    {
        CHECK(render_history(History{{3, 3}, {}}, dir / "none").empty());
        CHECK_FALSE(std::filesystem::exists(dir / "none"));
    }
}
