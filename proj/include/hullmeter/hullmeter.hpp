#pragma once

#include "hullmeter/analytic_cases.hpp"
#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/error.hpp"
#include "hullmeter/hull_measure.hpp"
#include "hullmeter/product_overlap.hpp"
#include "hullmeter/quantum_states.hpp"
#include "hullmeter/separability_bounds.hpp"
#include "hullmeter/state_io.hpp"
