#pragma once

#include "esync/cost.hpp"
#include "esync/dither.hpp"
#include "esync/dynamics.hpp"
#include "esync/errors.hpp"
#include "esync/experiment.hpp"
#include "esync/lie.hpp"
