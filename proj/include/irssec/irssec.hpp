// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the irssec library.

#pragma once

#include "irssec/beamform.hpp"
#include "irssec/channel.hpp"
#include "irssec/config.hpp"
#include "irssec/error.hpp"
#include "irssec/experiments.hpp"
#include "irssec/jointdesign.hpp"
#include "irssec/numkernel.hpp"
#include "irssec/phase_vector.hpp"
#include "irssec/phaseopt.hpp"
#include "irssec/scenario.hpp"
#include "irssec/sdpsolver.hpp"
#include "irssec/secrecy.hpp"
