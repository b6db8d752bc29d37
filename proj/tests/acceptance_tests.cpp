// End-to-end verification gate: runs every criterion on the built-in
// fixtures and requires each one to pass, printing one line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "trajlab/verify.hpp"

TEST_CASE("verification criteria") {
    const auto results = trajlab::run_verification(4);
    trajlab::print_verification(results, std::cout);
    for (const auto& res : results) {
        CAPTURE(res.name);
        CAPTURE(res.detail);
        CHECK(res.passed);
    }
}
