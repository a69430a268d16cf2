#include "doctest.h"

#include "lattice/quad.hpp"

TEST_CASE("placeholder quad") { CHECK(true); }
