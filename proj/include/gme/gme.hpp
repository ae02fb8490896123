#pragma once

// Umbrella header.

#include "gme/errors.hpp"
#include "gme/optimizer.hpp"
#include "gme/oracle.hpp"
#include "gme/qkernel.hpp"
#include "gme/svetlichny.hpp"
#include "gme/sweep.hpp"
#include "gme/tfim.hpp"
