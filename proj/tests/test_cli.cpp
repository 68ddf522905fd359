#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "numrange/cli.hpp"
#include "numrange/gallery.hpp"

using namespace numrange;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("numrange_cli_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("matrix json round trip is exact") {
    const ComplexMatrix a = random_dense(3, 5);
    const ComplexMatrix b = matrix_from_json(Json::parse(dump(matrix_to_json(a))));
    REQUIRE(b.dim() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(a(i, j) == b(i, j));
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dim":2,"re":[[1,2]]})")), Error);
}

TEST_CASE("config keys fill the run config") {
    RunConfig cfg;
    apply_config_json(cfg, Json::parse(R"({"gallery":"jordan:2","seed":9,"alpha":"0.1,0.2","targets":[[0.5,0]]})"));
    CHECK(cfg.gallery == "jordan:2");
    CHECK(cfg.seed == 9);
    CHECK(*cfg.alpha == cplx(0.1, 0.2));
    CHECK(cfg.targets.size() == 1);
    CHECK_THROWS_AS(apply_config_json(cfg, Json::parse(R"({"sead":1})")), Error);
    CHECK(parse_point("-1.5,2") == cplx(-1.5, 2.0));
    CHECK_THROWS_AS(parse_point("1;2"), Error);
}

TEST_CASE("range writes its artifacts and bad input exits 2") {
    std::ostringstream sink;
    RunConfig cfg;
    cfg.command = "range";
    cfg.gallery = "jordan:2";
    cfg.out = scratch("range").string();
    CHECK(run(cfg, sink, sink) == 0);
    for (const char* f : {"atlas.csv", "atlas.json", "plot.svg"}) CHECK(std::filesystem::exists(std::filesystem::path(cfg.out) / f));
    const Json atlas = Json::parse(read_text((std::filesystem::path(cfg.out) / "atlas.json").string()));
    CHECK(atlas.contains("vertices"));

    RunConfig none;
    none.command = "range";
    none.out = cfg.out;
    CHECK(run(none, sink, sink) == 2);

    RunConfig unknown = cfg;
    unknown.gallery = "no-such-operator";
    CHECK(run(unknown, sink, sink) == 2);

    RunConfig witness = cfg;
    witness.command = "witness";
    CHECK(run(witness, sink, sink) == 2);
}
