#ifndef SDEMC_SDEMC_HPP
#define SDEMC_SDEMC_HPP

#include "sdemc/baselines.hpp"
#include "sdemc/benchmark.hpp"
#include "sdemc/bridge.hpp"
#include "sdemc/config.hpp"
#include "sdemc/data.hpp"
#include "sdemc/diagnostics.hpp"
#include "sdemc/ea1.hpp"
#include "sdemc/errors.hpp"
#include "sdemc/experiment.hpp"
#include "sdemc/gibbs.hpp"
#include "sdemc/hmc.hpp"
#include "sdemc/models.hpp"
#include "sdemc/params.hpp"
#include "sdemc/random.hpp"
#include "sdemc/runner.hpp"
#include "sdemc/skeleton.hpp"
#include "sdemc/tempering.hpp"
#include "sdemc/trace.hpp"

#endif
