#pragma once

#include "lhv/coincidence.hpp"
#include "lhv/config.hpp"
#include "lhv/ensembles.hpp"
#include "lhv/errors.hpp"
#include "lhv/experiments.hpp"
#include "lhv/integrator.hpp"
#include "lhv/measurement.hpp"
#include "lhv/model.hpp"
#include "lhv/parallel.hpp"
#include "lhv/report.hpp"
#include "lhv/rng.hpp"
#include "lhv/vec3.hpp"
#include "lhv/version.hpp"
