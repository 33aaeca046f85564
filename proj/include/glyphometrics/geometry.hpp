#pragma once

#include "glyphometrics/geometry/bspline.hpp"
#include "glyphometrics/geometry/crossings.hpp"
#include "glyphometrics/geometry/curve.hpp"
#include "glyphometrics/geometry/enclosing_circle.hpp"
#include "glyphometrics/geometry/fit.hpp"
#include "glyphometrics/geometry/hull.hpp"
#include "glyphometrics/geometry/simplify.hpp"
#include "glyphometrics/geometry/types.hpp"
