#include "doctest.h"

#include "lattice/classical.hpp"

TEST_CASE("placeholder classical") { CHECK(true); }
