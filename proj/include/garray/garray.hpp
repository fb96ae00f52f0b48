#pragma once

#include "garray/analysis.hpp"
#include "garray/detector.hpp"
#include "garray/errors.hpp"
#include "garray/generators.hpp"
#include "garray/invariants.hpp"
#include "garray/kinematics.hpp"
#include "garray/observables.hpp"
#include "garray/pipeline.hpp"
