#pragma once

#include "lscp/bootstrap.hpp"
#include "lscp/cusum.hpp"
#include "lscp/designs.hpp"
#include "lscp/error.hpp"
#include "lscp/estimator.hpp"
#include "lscp/functionals.hpp"
#include "lscp/ingest.hpp"
#include "lscp/montecarlo.hpp"
#include "lscp/rng.hpp"
#include "lscp/series.hpp"
#include "lscp/simulate.hpp"
#include "lscp/smoothing.hpp"
