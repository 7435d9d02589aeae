#pragma once

#include "cover_census/asymptotics.hpp"
#include "cover_census/cover_counts.hpp"
#include "cover_census/exact_kernel.hpp"
#include "cover_census/oracle.hpp"
#include "cover_census/sampler.hpp"
#include "cover_census/series.hpp"
