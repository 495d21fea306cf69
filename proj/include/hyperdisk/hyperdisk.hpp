#pragma once

#include "abel.hpp"
#include "diagnostics.hpp"
#include "eigen.hpp"
#include "fourier.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "radon_euclid.hpp"
#include "radon_hyp.hpp"
