#pragma once

#include "bottkit/core.hpp"
#include "bottkit/linalg.hpp"
#include "bottkit/fan.hpp"
#include "bottkit/relations.hpp"
#include "bottkit/divisors.hpp"
#include "bottkit/classify.hpp"
#include "bottkit/report.hpp"
#include "bottkit/census.hpp"
