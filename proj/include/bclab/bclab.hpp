#pragma once

#include "bc.hpp"
#include "circle_set.hpp"
#include "contfrac.hpp"
#include "dynsim.hpp"
#include "json_io.hpp"
#include "moments.hpp"
#include "numtheory.hpp"
#include "psi_expr.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "targets.hpp"
