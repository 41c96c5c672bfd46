#pragma once

// Umbrella header.
#include "gradua/action.hpp"
#include "gradua/chart.hpp"
#include "gradua/errors.hpp"
#include "gradua/family.hpp"
#include "gradua/graded.hpp"
#include "gradua/jets.hpp"
#include "gradua/map.hpp"
#include "gradua/matrix.hpp"
#include "gradua/multigrade.hpp"
#include "gradua/polynomial.hpp"
#include "gradua/rational.hpp"
