#pragma once

// Umbrella header: the whole library.

#include "conjecture.hpp"
#include "errors.hpp"
#include "field_oracle.hpp"
#include "ground.hpp"
#include "matroid.hpp"
#include "pivots.hpp"
#include "positroid.hpp"
#include "set_system.hpp"
#include "wilson_loop.hpp"
