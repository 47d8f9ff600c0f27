#include <doctest.h>
#include "eult/multigraph.hpp"
TEST_CASE("placeholder test_exploration") { CHECK(true); }
