#pragma once

#include "rmlab/errors.hpp"
#include "rmlab/scalar.hpp"
#include "rmlab/params.hpp"
#include "rmlab/geometry.hpp"
#include "rmlab/series.hpp"
#include "rmlab/quadrature.hpp"
#include "rmlab/estimate.hpp"
#include "rmlab/funcrep.hpp"
#include "rmlab/constructions.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/norms.hpp"
#include "rmlab/analysis.hpp"
#include "rmlab/io.hpp"
#include "rmlab/random.hpp"
#include "rmlab/config.hpp"
#include "rmlab/probes.hpp"
#include "rmlab/experiment.hpp"
