#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "meln/errors.hpp"
#include "meln/suites.hpp"

using namespace meln;

TEST_CASE("suite registry") {
    const auto& names = suite_names();
    REQUIRE(names.size() == 6);
    CHECK(names[0] == "identities");
    CHECK_THROWS_AS(run_suite("bogus"), UsageError);
}

TEST_CASE("exact structural suites pass") {
    for (const char* name : {"table-n8", "degrees"}) {
        const nlohmann::ordered_json rep = run_suite(name);
        CHECK(rep.at("suite") == name);
        CHECK(rep.at("pass").get<bool>());
        CHECK(rep.at("checks").size() > 0);
        for (const auto& check : rep.at("checks")) CHECK(check.at("pass").get<bool>());
    }
}
