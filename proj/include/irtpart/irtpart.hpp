#ifndef IRTPART_IRTPART_HPP
#define IRTPART_IRTPART_HPP

// Umbrella header: the whole library in one include.

#include "irtpart/arff.hpp"
#include "irtpart/calibrate.hpp"
#include "irtpart/common.hpp"
#include "irtpart/config.hpp"
#include "irtpart/csv.hpp"
#include "irtpart/dataset.hpp"
#include "irtpart/digest.hpp"
#include "irtpart/evaluation.hpp"
#include "irtpart/icc.hpp"
#include "irtpart/learners.hpp"
#include "irtpart/matrix.hpp"
#include "irtpart/metrics.hpp"
#include "irtpart/openml.hpp"
#include "irtpart/partitioning.hpp"
#include "irtpart/pipeline.hpp"
#include "irtpart/prng.hpp"
#include "irtpart/quadrature.hpp"
#include "irtpart/response_matrix.hpp"
#include "irtpart/stats.hpp"
#include "irtpart/zoo.hpp"

#endif
