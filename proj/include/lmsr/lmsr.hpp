#pragma once

#include "lmsr/assignment.hpp"
#include "lmsr/bool_market.hpp"
#include "lmsr/correspondence.hpp"
#include "lmsr/domain.hpp"
#include "lmsr/errors.hpp"
#include "lmsr/io.hpp"
#include "lmsr/market.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/numeric.hpp"
#include "lmsr/outcome_space.hpp"
#include "lmsr/pair_market.hpp"
#include "lmsr/partial_order.hpp"
#include "lmsr/permanent.hpp"
#include "lmsr/permelearn.hpp"
#include "lmsr/reductions.hpp"
#include "lmsr/scenario.hpp"
#include "lmsr/securities.hpp"
#include "lmsr/sinkhorn.hpp"
#include "lmsr/subset_approx.hpp"
#include "lmsr/subset_market.hpp"
#include "lmsr/sweep.hpp"
#include "lmsr/weighted_majority.hpp"
