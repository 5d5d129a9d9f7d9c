#include <doctest.h>

#include "museum/errors.hpp"
#include "museum/profile.hpp"

#include "test_support.hpp"

using museum::EngineError;
using museum::ErrorKind;
using museum::TokenSet;
using museum::load_profile;

TEST_CASE("profile keywords normalize through the tokenizer") {
    testing::TempDir tmp;
    auto path = tmp.path() / "energy_finance.txt";
    testing::write_text(path, "Energy\nfinance\n");
    auto profile = load_profile(path);
    CHECK(profile.keywords == TokenSet{"energy", "finance"});
    CHECK(profile.profile_id == "energy_finance");
}

TEST_CASE("comments, blanks, duplicates, multi-word lines") {
    testing::TempDir tmp;
    auto path = tmp.path() / "p.txt";
    testing::write_text(path,
                        "# interests\n"
                        "\n"
                        "Solar ENERGY\n"
                        "energy\n"
                        "  the  \n");
    auto profile = load_profile(path);
    // Multi-word lines contribute each token; duplicates collapse; stop
    // words drop.
    CHECK(profile.keywords == TokenSet{"energy", "solar"});
}

TEST_CASE("empty file is a valid anonymous profile") {
    testing::TempDir tmp;
    auto path = tmp.path() / "anon.txt";
    testing::write_text(path, "");
    CHECK(load_profile(path).keywords.empty());
}

TEST_CASE("missing file is NotFound") {
    testing::TempDir tmp;
    try {
        load_profile(tmp.path() / "nope.txt");
        FAIL("expected NotFound");
    } catch (const EngineError& e) {
        CHECK(e.kind() == ErrorKind::NotFound);
    }
}

TEST_CASE("loading twice yields equal profiles") {
    testing::TempDir tmp;
    auto path = tmp.path() / "p.txt";
    testing::write_text(path, "alpha\nbeta\n");
    CHECK(load_profile(path).keywords == load_profile(path).keywords);
}
