#pragma once

#include "divk/completion.hpp"
#include "divk/errors.hpp"
#include "divk/feasibility.hpp"
#include "divk/generators.hpp"
#include "divk/instance.hpp"
#include "divk/localsearch.hpp"
#include "divk/metrics.hpp"
#include "divk/metricspace.hpp"
#include "divk/oracle.hpp"
#include "divk/relaxed.hpp"
#include "divk/shrink.hpp"
