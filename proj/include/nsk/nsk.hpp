#pragma once

#include "nsk/error.hpp"
#include "nsk/thermo.hpp"
#include "nsk/coefficients.hpp"
#include "nsk/grid.hpp"
#include "nsk/states.hpp"
#include "nsk/burgers.hpp"
#include "nsk/rarefaction.hpp"
#include "nsk/middle_states.hpp"
#include "nsk/selfsimilar.hpp"
#include "nsk/contact.hpp"
#include "nsk/composite.hpp"
#include "nsk/solver.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/config.hpp"
#include "nsk/scenario.hpp"
