#include "doctest.h"

#include "lattice/report.hpp"

TEST_CASE("placeholder cli") { CHECK(true); }
