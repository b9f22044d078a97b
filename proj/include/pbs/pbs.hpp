#pragma once

#include "pbs/bs_core.hpp"
#include "pbs/error_structure.hpp"
#include "pbs/implied_vol.hpp"
#include "pbs/option_spec.hpp"
#include "pbs/oracle.hpp"
#include "pbs/pbs_pricing.hpp"
#include "pbs/sweep.hpp"
#include "pbs/validate.hpp"
#include "pbs/version.hpp"
