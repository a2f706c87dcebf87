#pragma once

// Umbrella header for the whole library.

#include "mixlayer/closures.hpp"
#include "mixlayer/column.hpp"
#include "mixlayer/commands.hpp"
#include "mixlayer/config.hpp"
#include "mixlayer/csv.hpp"
#include "mixlayer/cubic.hpp"
#include "mixlayer/equilibrium.hpp"
#include "mixlayer/errors.hpp"
#include "mixlayer/stability.hpp"
#include "mixlayer/tridiagonal.hpp"
