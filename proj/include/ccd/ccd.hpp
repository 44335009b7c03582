#pragma once

#include "ccd/error.hpp"
#include "ccd/heisenberg.hpp"
#include "ccd/curvature.hpp"
#include "ccd/classify.hpp"
#include "ccd/quadrature.hpp"
#include "ccd/profile_ode.hpp"
#include "ccd/closed_forms.hpp"
#include "ccd/measures.hpp"
