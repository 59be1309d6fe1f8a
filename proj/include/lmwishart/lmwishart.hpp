#pragma once

#include "lmwishart/error.hpp"
#include "lmwishart/graph.hpp"
#include "lmwishart/chordal.hpp"
#include "lmwishart/homogeneous.hpp"
#include "lmwishart/enumeration.hpp"
#include "lmwishart/dag_versions.hpp"
#include "lmwishart/matrix.hpp"
#include "lmwishart/affine.hpp"
#include "lmwishart/linear_constraints.hpp"
#include "lmwishart/parameter_sets.hpp"
#include "lmwishart/markov_ratio.hpp"
#include "lmwishart/dag_wishart.hpp"
#include "lmwishart/monte_carlo.hpp"
#include "lmwishart/verification.hpp"
