#pragma once

#include "capacity.hpp"
#include "ensemble.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "gram.hpp"
#include "gram_io.hpp"
#include "matrix.hpp"
#include "spectral.hpp"
#include "sweep.hpp"
#include "symmetry.hpp"
