#pragma once

#include "willmore/catalog.hpp"
#include "willmore/error.hpp"
#include "willmore/functional.hpp"
#include "willmore/immersion.hpp"
#include "willmore/io.hpp"
#include "willmore/jet.hpp"
#include "willmore/linalg.hpp"
#include "willmore/mobius.hpp"
#include "willmore/optimize.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/random.hpp"
#include "willmore/suites.hpp"
#include "willmore/tensor.hpp"
