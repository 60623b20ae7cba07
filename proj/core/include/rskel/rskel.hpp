#pragma once

#include "rskel/adaptive.hpp"
#include "rskel/blas.hpp"
#include "rskel/errors.hpp"
#include "rskel/io.hpp"
#include "rskel/lu.hpp"
#include "rskel/matrix.hpp"
#include "rskel/qr.hpp"
#include "rskel/rng.hpp"
#include "rskel/sketch.hpp"
#include "rskel/skeleton.hpp"
#include "rskel/svd.hpp"
#include "rskel/zoo.hpp"
