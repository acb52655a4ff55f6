#pragma once

#include "strangeci/errors.hpp"
#include "strangeci/gf.hpp"
#include "strangeci/exactla.hpp"
#include "strangeci/hompoly.hpp"
#include "strangeci/geometry.hpp"
#include "strangeci/strangeness.hpp"
#include "strangeci/families.hpp"
#include "strangeci/census.hpp"
