#pragma once

#include "ratio_bounds/core.hpp"
#include "ratio_bounds/specfun.hpp"
#include "ratio_bounds/distributions.hpp"
#include "ratio_bounds/ratio.hpp"
#include "ratio_bounds/bounds.hpp"
#include "ratio_bounds/quadrature.hpp"
#include "ratio_bounds/divergence.hpp"
#include "ratio_bounds/random.hpp"
#include "ratio_bounds/sampler.hpp"
