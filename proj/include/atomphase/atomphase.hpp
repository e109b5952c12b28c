#pragma once

#include "atomphase/berry_phase.hpp"
#include "atomphase/config.hpp"
#include "atomphase/dataset.hpp"
#include "atomphase/dynamics.hpp"
#include "atomphase/ode.hpp"
#include "atomphase/permittivity.hpp"
#include "atomphase/quadrature.hpp"
#include "atomphase/selfcheck.hpp"
#include "atomphase/surface_response.hpp"
#include "atomphase/sweep.hpp"
#include "atomphase/version.hpp"
#include "atomphase/volterra.hpp"
