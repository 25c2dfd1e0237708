#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "meln/errors.hpp"
#include "meln/report.hpp"

using namespace meln;
using nlohmann::ordered_json;

TEST_CASE("shortest stable float rendering") {
    CHECK(float17(0.1) == "0.10000000000000001");
    CHECK(float17(-0.5) == "-0.5");
    CHECK(float17(1.0) == "1");
    CHECK(float17(0.0) == "0");
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const double x =
            (static_cast<double>(rng()) / 18446744073709551616.0 - 0.5) * std::pow(10.0, k % 7);
        CHECK(std::strtod(float17(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("hash primitives match the published reference values") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex64(0) == "0000000000000000");
}

TEST_CASE("configuration hashing is order-sensitive and stable") {
    ordered_json a;
    a["x"] = 1;
    a["y"] = "two";
    ordered_json b;
    b["y"] = "two";
    b["x"] = 1;
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a) != config_hash(b));  // insertion order is part of the identity
    ordered_json c = a;
    CHECK(config_hash(c) == config_hash(a));
}

TEST_CASE("report envelope carries identity and config") {
    ordered_json cfg;
    cfg["suite"] = "identities";
    const ordered_json doc = report_envelope("verify", cfg);
    CHECK(doc.at("tool") == "meln");
    CHECK(doc.at("version") == "1.0.0");
    CHECK(doc.at("command") == "verify");
    CHECK(doc.at("config") == cfg);
    CHECK(doc.at("config_hash") == config_hash(cfg));

    const std::string text = report_text(doc);
    CHECK(text.back() == '\n');
    const ordered_json back = ordered_json::parse(text);
    CHECK(back.at("config_hash") == doc.at("config_hash"));
}

TEST_CASE("file writing failures are reported") {
    CHECK_THROWS_AS(write_text_file("/nonexistent_dir_xyz/file.json", "x"), UsageError);
}
