#pragma once

#include "plc/behavior.hpp"
#include "plc/collision.hpp"
#include "plc/config.hpp"
#include "plc/distance_field.hpp"
#include "plc/errors.hpp"
#include "plc/export.hpp"
#include "plc/geometry.hpp"
#include "plc/global_planner.hpp"
#include "plc/lane_field.hpp"
#include "plc/local_planner.hpp"
#include "plc/metrics.hpp"
#include "plc/occupancy_grid.hpp"
#include "plc/pedestrian.hpp"
#include "plc/perception.hpp"
#include "plc/rng.hpp"
#include "plc/scenario.hpp"
#include "plc/simulation.hpp"
