#pragma once

#include "symtherm/error.hpp"
#include "symtherm/ifs.hpp"
#include "symtherm/massdist.hpp"
#include "symtherm/potential.hpp"
#include "symtherm/sft.hpp"
#include "symtherm/thermo.hpp"
#include "symtherm/wordsets.hpp"
