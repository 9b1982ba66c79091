#ifndef CASCADELAB_CASCADELAB_HPP
#define CASCADELAB_CASCADELAB_HPP

#include "cascadelab/cascade.hpp"
#include "cascadelab/csv.hpp"
#include "cascadelab/error.hpp"
#include "cascadelab/graph.hpp"
#include "cascadelab/netgen.hpp"
#include "cascadelab/rng.hpp"
#include "cascadelab/spreadstats.hpp"
#include "cascadelab/stats.hpp"
#include "cascadelab/sweep.hpp"
#include "cascadelab/tweetlog.hpp"
#include "cascadelab/version.hpp"

#endif  // CASCADELAB_CASCADELAB_HPP
