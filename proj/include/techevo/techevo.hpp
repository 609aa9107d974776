#pragma once

/// Umbrella header: the whole library is header-only, so including this
/// one file provides every module.

#include "techevo/cli.hpp"
#include "techevo/coevo.hpp"
#include "techevo/csv.hpp"
#include "techevo/descstats.hpp"
#include "techevo/errors.hpp"
#include "techevo/evolution.hpp"
#include "techevo/regress.hpp"
#include "techevo/report.hpp"
#include "techevo/series.hpp"
#include "techevo/sigmoid.hpp"
#include "techevo/synth.hpp"
