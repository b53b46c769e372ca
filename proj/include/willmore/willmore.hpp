#pragma once

#include "willmore/errors.hpp"
#include "willmore/polynomial.hpp"
#include "willmore/weierstrass.hpp"
#include "willmore/elastica.hpp"
#include "willmore/curvegen.hpp"
#include "willmore/closing.hpp"
#include "willmore/geometry.hpp"
#include "willmore/mesh_io.hpp"
#include "willmore/checks.hpp"
