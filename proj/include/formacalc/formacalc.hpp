#pragma once

// Umbrella header: the full exact-calculus kernel for coordinate formal
// manifolds plus the script front end.

#include "formacalc/certify.hpp"
#include "formacalc/diffop.hpp"
#include "formacalc/json_io.hpp"
#include "formacalc/script/interp.hpp"
#include "formacalc/suites.hpp"
