#pragma once

#include "teamfit/aggregation.hpp"
#include "teamfit/core_model.hpp"
#include "teamfit/device_fit.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/io_persistence.hpp"
#include "teamfit/projection_gap.hpp"
#include "teamfit/prototype_classes.hpp"
#include "teamfit/reports.hpp"
#include "teamfit/team_assembly.hpp"
