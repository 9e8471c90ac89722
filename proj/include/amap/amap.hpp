#pragma once

#include "amap/asymptotics.hpp"
#include "amap/bignum.hpp"
#include "amap/counting.hpp"
#include "amap/cycle_set.hpp"
#include "amap/error.hpp"
#include "amap/oracle.hpp"
#include "amap/parallel.hpp"
#include "amap/qseries.hpp"
#include "amap/sampler.hpp"
