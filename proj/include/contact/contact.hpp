#pragma once

// Umbrella header for the contact integrators library.

#include "contact/contact_form.hpp"
#include "contact/counters.hpp"
#include "contact/errors.hpp"
#include "contact/integrate.hpp"
#include "contact/model.hpp"
#include "contact/models.hpp"
#include "contact/runge_kutta.hpp"
#include "contact/splitting.hpp"
#include "contact/state.hpp"
#include "contact/variational.hpp"
#include "contact/diagnostics/benchmark.hpp"
#include "contact/diagnostics/convergence.hpp"
#include "contact/diagnostics/fit.hpp"
#include "contact/diagnostics/fixed_point.hpp"
#include "contact/diagnostics/gel_residual.hpp"
#include "contact/diagnostics/kepler.hpp"
#include "contact/diagnostics/oscillator.hpp"
#include "contact/diagnostics/stability.hpp"
