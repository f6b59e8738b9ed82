#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "dioph/eq.hpp"
TEST_CASE("placeholder_padic") { CHECK(dioph::hat_s(5) == 4); }
