#pragma once

#include "grflab/rational.hpp"
#include "grflab/polynomial.hpp"
#include "grflab/integrate.hpp"
#include "grflab/jet.hpp"
#include "grflab/sphere.hpp"
#include "grflab/linalg.hpp"
#include "grflab/random.hpp"
#include "grflab/lie_frame.hpp"
#include "grflab/tensor.hpp"
#include "grflab/geometry.hpp"
#include "grflab/variational.hpp"
#include "grflab/deformations.hpp"
#include "grflab/flow.hpp"
#include "grflab/json_io.hpp"
