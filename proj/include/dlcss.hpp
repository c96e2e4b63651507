#pragma once

#include "dlcss/errors.hpp"
#include "dlcss/geo.hpp"
#include "dlcss/core.hpp"
#include "dlcss/matcher.hpp"
#include "dlcss/routing_oracle.hpp"
#include "dlcss/dataset_io.hpp"
#include "dlcss/meeting_points.hpp"
#include "dlcss/evaluation.hpp"
