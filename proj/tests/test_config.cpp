#include "nldiff/config.hpp"
#include "nldiff/inequalities.hpp"
#include "nldiff/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace nldiff;

TEST_CASE("key-value parsing with sections, comments, quotes") {
    const auto cfg = KeyValueConfig::parse_text(
        "# comment\n"
        "operator.kind = \"fractional_laplacian\"\n"
        "[grid]\n"
        "n = 128  # inline comment\n"
        "L = 32.0\n");
    CHECK(cfg.get_string("operator.kind") == "fractional_laplacian");
    CHECK(cfg.get_number("grid.n") == 128);
    CHECK(cfg.get_number("grid.L") == 32.0);
    CHECK(cfg.get_number("grid.missing", 7.0) == 7.0);
    CHECK_THROWS_AS(cfg.get_string("nope"), ConfigError);
}

TEST_CASE("JSON alternative input") {
    const auto cfg = KeyValueConfig::parse_text(
        R"({"operator": {"kind": "laplacian"}, "grid": {"n": 64}})");
    CHECK(cfg.get_string("operator.kind") == "laplacian");
    CHECK(cfg.get_int("grid.n", 0) == 64);
}

TEST_CASE("parse errors carry line numbers; unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(KeyValueConfig::parse_text("just a line\n"),
                         doctest::Contains("line 1"), ConfigError);
    const auto cfg = KeyValueConfig::parse_text("a.x = 1\nb.y = 2\n");
    CHECK_THROWS_WITH_AS(cfg.reject_unknown({"a"}), doctest::Contains("b.y"),
                         ConfigError);
    CHECK_NOTHROW(cfg.reject_unknown({"a", "b"}));
    CHECK_THROWS_AS(KeyValueConfig::parse_text("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("operators from config, including nesting") {
    const Grid g(1, 64, 16.0);
    {
        const auto cfg = KeyValueConfig::parse_text(
            "operator.kind = fractional_laplacian\noperator.alpha = 1.5\n");
        const auto spec = operator_from_config(cfg, "operator", g);
        CHECK(spec.kind() == OperatorKind::FractionalLaplacian);
        CHECK(spec.alpha() == 1.5);
    }
    {
        const auto cfg = KeyValueConfig::parse_text(
            "[operator]\n"
            "kind = shifted\n"
            "shift_c = 1.0\n"
            "base.kind = sum\n"
            "base.left.kind = laplacian\n"
            "base.right.kind = fractional_laplacian\n"
            "base.right.alpha = 0.5\n");
        const auto spec = operator_from_config(cfg, "operator", g);
        CHECK(spec.kind() == OperatorKind::Shifted);
        CHECK(symbol(spec, {0.0}) == doctest::Approx(1.0));
    }
    {
        const auto cfg = KeyValueConfig::parse_text(
            "operator.kind = convolution_zero_order\n"
            "operator.kernel = gaussian\n"
            "operator.width = 0.5\n");
        const auto spec = operator_from_config(cfg, "operator", g);
        CHECK(spec.kind() == OperatorKind::Convolution0Order);
        CHECK(integral(*spec.levy_kernel()) == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
        const auto cfg = KeyValueConfig::parse_text("operator.kind = bogus\n");
        CHECK_THROWS_AS(operator_from_config(cfg, "operator", g), ConfigError);
    }
    {
        const auto cfg = KeyValueConfig::parse_text(
            "operator.kind = anisotropic_fractional_sum\noperator.alphas = 0.5, 1.0\n");
        const auto spec = operator_from_config(cfg, "operator");
        CHECK(spec.alphas().size() == 2);
    }
}

TEST_CASE("grid spec strings") {
    const Grid g = grid_from_string("n=256,L=32,dim=3");
    CHECK(g.n() == 256);
    CHECK(g.side() == 32.0);
    CHECK(g.dim() == 3);
    CHECK_THROWS_AS(grid_from_string("n=256,bad=1"), ConfigError);
}

TEST_CASE("field CSV and binary round-trips") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "nldiff_io_test";
    fs::create_directories(dir);
    const Grid g(1, 32, 8.0);
    Field f = gaussian_bump(g, 1.0);
    const std::string csv = (dir / "f.csv").string();
    write_field_csv(f, csv);
    const Field back = read_field_csv(g, csv);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-15));

    const std::string bin = (dir / "f.bin").string();
    write_field_binary(f, bin);
    const Field back2 = read_field_binary(bin);
    CHECK(back2.grid() == g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back2[i] == f[i]);
    fs::remove_all(dir);
}
