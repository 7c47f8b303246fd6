#pragma once

#include "slope/convexity.hpp"
#include "slope/error.hpp"
#include "slope/geodesics.hpp"
#include "slope/metric.hpp"
#include "slope/numeric.hpp"
#include "slope/profile.hpp"
#include "slope/surface.hpp"
#include "slope/vec2.hpp"
