#pragma once

#include "regphase/errors.hpp"
#include "regphase/fock.hpp"
#include "regphase/special.hpp"
#include "regphase/polar.hpp"
#include "regphase/phase_operator.hpp"
#include "regphase/su11.hpp"
#include "regphase/povm.hpp"
