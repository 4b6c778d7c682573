#include "kants/dataset.hpp"
#include "kants/experiment.hpp"
#include "kants/text.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace kants;

TEST_CASE("bundled datasets have the published shapes")
{
    SUBCASE("iris: 150 samples, 4 features, 50 per class")
    {
        const auto ds = load_csv(test::data_path("iris.csv"));
        CHECK(ds.size() == 150);
        CHECK(ds.nvars == 4);
        REQUIRE(ds.labels.size() == 3);
        for (auto n : ds.class_counts())
            CHECK(n == 50);
    }
    SUBCASE("glass: 214 samples, 9 features after dropping the ID, 6 classes")
    {
        const auto ds = load_csv(test::data_path("glass.csv"), find_preset("glass")->csv);
        CHECK(ds.size() == 214);
        CHECK(ds.nvars == 9);
        CHECK(ds.labels == std::vector<std::string>{"1", "2", "3", "5", "6", "7"});
    }
    SUBCASE("pima: 768 samples, 8 features, 2 classes")
    {
        const auto ds = load_csv(test::data_path("pima.csv"));
        CHECK(ds.size() == 768);
        CHECK(ds.nvars == 8);
        CHECK(ds.labels.size() == 2);
    }
}

TEST_CASE("parse_csv layout handling")
{
    SUBCASE("header row is detected and skipped")
    {
        const auto ds = parse_csv("a,b,class\n1,2,x\n3,4,y\n");
        CHECK(ds.size() == 2);
        CHECK(ds.nvars == 2);
        CHECK(ds.samples[1].features == FeatureVector{3, 4});
    }
    SUBCASE("row order is preserved")
    {
        const auto ds = parse_csv("3,b\n1,a\n2,b\n");
        CHECK(ds.samples[0].features[0] == 3);
        CHECK(ds.samples[1].features[0] == 1);
        CHECK(ds.label_name(ds.samples[0].label) == "b");
    }
    SUBCASE("label column and ignored columns")
    {
        const auto ds = parse_csv("7,a,1.5,2.5\n8,b,3.5,4.5\n", {1, {0}});
        CHECK(ds.nvars == 2);
        CHECK(ds.samples[0].features == FeatureVector{1.5, 2.5});
        CHECK(ds.label_name(ds.samples[1].label) == "b");
    }
    SUBCASE("numeric labels sort numerically")
    {
        const auto ds = parse_csv("1,10\n2,9\n3,2\n");
        CHECK(ds.labels == std::vector<std::string>{"2", "9", "10"});
    }
    SUBCASE("blank lines and CRLF are tolerated")
    {
        const auto ds = parse_csv("1,2,a\r\n\r\n3,4,b\r\n");
        CHECK(ds.size() == 2);
    }
}

TEST_CASE("parse_csv errors name the line")
{
    SUBCASE("column count mismatch")
    {
        try {
            parse_csv("1,2,a\n3,4,b\n5,b\n", {}, "bad.csv");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
        }
    }
    SUBCASE("non-numeric feature")
    {
        try {
            parse_csv("1,2,a\n3,x,b\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("non-finite feature")
    {
        CHECK_THROWS_AS(parse_csv("1,2,a\n3,inf,b\n"), ParseError);
    }
    SUBCASE("empty input")
    {
        CHECK_THROWS_AS(parse_csv(""), ParseError);
        CHECK_THROWS_AS(parse_csv("a,b,c\n"), ParseError);
    }
    SUBCASE("empty label")
    {
        CHECK_THROWS_AS(parse_csv("1,2,\n"), ParseError);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_WITH_AS(load_csv("/no/such/data.csv"), doctest::Contains("/no/such/data.csv"),
                             std::runtime_error);
    }
}

TEST_CASE("normalize")
{
    SUBCASE("min-max endpoints")
    {
        const auto ds = parse_csv("2,a\n4,a\n6,b\n");
        const auto n = normalize(ds);
        CHECK(n.data.samples[0].features[0] == 0.0);
        CHECK(n.data.samples[1].features[0] == 0.5);
        CHECK(n.data.samples[2].features[0] == 1.0);
        CHECK(n.ranges[0].min == 2.0);
        CHECK(n.ranges[0].max == 6.0);
    }
    SUBCASE("test values are clamped to the training range")
    {
        const auto test_set = parse_csv("7,a\n1,a\n3,a\n");
        const auto n = normalize(test_set, FeatureRanges{{2.0, 6.0}});
        CHECK(n.data.samples[0].features[0] == 1.0);
        CHECK(n.data.samples[1].features[0] == 0.0);
        CHECK(n.data.samples[2].features[0] == 0.25);
    }
    SUBCASE("already-normalized column is unchanged")
    {
        const auto ds = parse_csv("0,a\n0.25,a\n1,a\n");
        const auto n = normalize(ds, FeatureRanges{{0.0, 1.0}});
        for (std::size_t i = 0; i < ds.size(); ++i)
            CHECK(n.data.samples[i].features[0] == ds.samples[i].features[0]);
    }
    SUBCASE("constant feature maps to 0.5")
    {
        const auto ds = parse_csv("3,1,a\n3,2,b\n");
        const auto n = normalize(ds);
        CHECK(n.ranges[0].constant());
        CHECK(n.data.samples[0].features[0] == 0.5);
        CHECK(n.data.samples[1].features[0] == 0.5);
    }
    SUBCASE("range count must match")
    {
        CHECK_THROWS_AS(normalize(parse_csv("1,2,a\n"), FeatureRanges{{0, 1}}), std::invalid_argument);
    }
}

TEST_CASE("stratified splits of Iris")
{
    const auto iris = load_csv(test::data_path("iris.csv"));
    SUBCASE("50/50 -> 75/75, 25 per class each side")
    {
        const auto s = stratified_split(iris, {0.5, true, 1});
        CHECK(s.train.size() == 75);
        CHECK(s.test.size() == 75);
        for (auto n : s.train.class_counts())
            CHECK(n == 25);
        for (auto n : s.test.class_counts())
            CHECK(n == 25);
    }
    SUBCASE("90/10 -> 135/15, 5 per class in test")
    {
        const auto s = stratified_split(iris, {0.9, true, 1});
        CHECK(s.train.size() == 135);
        CHECK(s.test.size() == 15);
        for (auto n : s.test.class_counts())
            CHECK(n == 5);
    }
    SUBCASE("same seed, same partition; other seed, other partition")
    {
        const auto a = stratified_split(iris, {0.5, true, 9});
        const auto b = stratified_split(iris, {0.5, true, 9});
        const auto c = stratified_split(iris, {0.5, true, 10});
        CHECK(a.train_rows == b.train_rows);
        CHECK(a.train == b.train);
        CHECK(a.train_rows != c.train_rows);
    }
    SUBCASE("rows keep their source order")
    {
        const auto s = stratified_split(iris, {0.5, true, 4});
        CHECK(std::is_sorted(s.train_rows.begin(), s.train_rows.end()));
        CHECK(std::is_sorted(s.test_rows.begin(), s.test_rows.end()));
        for (std::size_t i = 0; i < s.train_rows.size(); ++i)
            CHECK(s.train.samples[i] == iris.samples[s.train_rows[i]]);
    }
}

TEST_CASE("stratified split edge cases")
{
    SUBCASE("a singleton class goes to train with a warning")
    {
        const auto ds = parse_csv("1,a\n2,a\n3,a\n4,a\n5,b\n");
        const auto s = stratified_split(ds, {0.5, true, 1});
        REQUIRE(s.warnings.size() == 1);
        CHECK(s.warnings[0].find("'b'") != std::string::npos);
        CHECK(s.train.class_counts()[1] == 1);
        CHECK(s.test.class_counts()[1] == 0);
    }
    SUBCASE("every class with two or more samples reaches both sides")
    {
        const auto ds = parse_csv("1,a\n2,a\n3,b\n4,b\n5,b\n6,b\n7,b\n8,b\n9,b\n10,b\n11,b\n12,b\n");
        const auto s = stratified_split(ds, {0.9, true, 3});
        CHECK(s.test.class_counts()[0] == 1);
        CHECK(s.test.class_counts()[1] == 1);
    }
    SUBCASE("fractions outside (0,1) are rejected")
    {
        const auto ds = parse_csv("1,a\n2,a\n");
        CHECK_THROWS_AS(stratified_split(ds, {1.5, true, 1}), std::invalid_argument);
        CHECK_THROWS_AS(stratified_split(ds, {0.0, true, 1}), std::invalid_argument);
        CHECK_THROWS_AS(stratified_split(ds, {1.0, true, 1}), std::invalid_argument);
    }
}

TEST_CASE("split names follow the tra/tst scheme")
{
    CHECK(split_name("iris", 0.5, 1) == "iris-50tra-50tst-set1");
    CHECK(split_name("iris", 0.9, 3) == "iris-90tra-10tst-set3");
    CHECK(split_name("pima", 0.75, 2) == "pima-75tra-25tst-set2");
}

TEST_CASE("split metadata sidecar")
{
    const auto dir = test::scratch_dir("split-meta");
    const auto iris = load_csv(test::data_path("iris.csv"));
    const SplitSpec spec{0.9, true, 77};
    write_split_files(stratified_split(iris, spec), spec, dir, "iris-90tra-10tst-set1");
    const auto meta = text::read_file((dir / "iris-90tra-10tst-set1.meta").string());
    CHECK(meta.find("seed=77\n") != std::string::npos);
    CHECK(meta.find("train_size=135\n") != std::string::npos);
    CHECK(meta.find("test_size=15\n") != std::string::npos);
    CHECK(meta.find("test_count.Iris-setosa=5\n") != std::string::npos);
}

TEST_CASE("align_labels maps names onto a reference table")
{
    const auto ds = parse_csv("1,b\n2,c\n");
    std::vector<std::string> reference{"a", "b"};
    const auto aligned = align_labels(ds, reference);
    CHECK(reference == std::vector<std::string>{"a", "b", "c"});
    CHECK(aligned.samples[0].label == 1);
    CHECK(aligned.samples[1].label == 2);
}
