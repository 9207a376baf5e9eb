#pragma once

#include "hambias/constructions.hpp"
#include "hambias/forest.hpp"
#include "hambias/graph.hpp"
#include "hambias/hall.hpp"
#include "hambias/matching.hpp"
#include "hambias/pipeline.hpp"
#include "hambias/posa.hpp"
#include "hambias/random_graphs.hpp"
#include "hambias/rational.hpp"
#include "hambias/rng.hpp"
