#pragma once

#include "pathsens/accumulate.hpp"
#include "pathsens/analysis.hpp"
#include "pathsens/estimators.hpp"
#include "pathsens/exact.hpp"
#include "pathsens/linalg.hpp"
#include "pathsens/models/finite_chain.hpp"
#include "pathsens/models/langevin.hpp"
#include "pathsens/models/schlogl.hpp"
#include "pathsens/models/zgb.hpp"
#include "pathsens/params.hpp"
#include "pathsens/rng.hpp"
#include "pathsens/simulate.hpp"
#include "pathsens/trajectory.hpp"
