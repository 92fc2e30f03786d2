#pragma once

#include "fy/bench.hpp"
#include "fy/entropy.hpp"
#include "fy/experiment.hpp"
#include "fy/loss.hpp"
#include "fy/measures.hpp"
#include "fy/permutahedron.hpp"
#include "fy/predict.hpp"
#include "fy/prox.hpp"
#include "fy/sequence.hpp"
#include "fy/sparsemap.hpp"
#include "fy/synth.hpp"
#include "fy/train.hpp"
#include "fy/types.hpp"
