#pragma once

#include "hybridsched/bff.hpp"
#include "hybridsched/demand.hpp"
#include "hybridsched/eclipse.hpp"
#include "hybridsched/io.hpp"
#include "hybridsched/matching.hpp"
#include "hybridsched/matrix.hpp"
#include "hybridsched/params.hpp"
#include "hybridsched/random.hpp"
#include "hybridsched/schedule.hpp"
#include "hybridsched/stats.hpp"
#include "hybridsched/sweep.hpp"
#include "hybridsched/twohop.hpp"
#include "hybridsched/validate.hpp"
