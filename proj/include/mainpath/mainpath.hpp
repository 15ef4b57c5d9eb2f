#pragma once

// Umbrella header for the whole toolkit.

#include "mainpath/common.hpp"
#include "mainpath/concept_paths.hpp"
#include "mainpath/csv.hpp"
#include "mainpath/dot.hpp"
#include "mainpath/indicators.hpp"
#include "mainpath/network.hpp"
#include "mainpath/pajek.hpp"
#include "mainpath/pipeline.hpp"
#include "mainpath/records.hpp"
#include "mainpath/search.hpp"
#include "mainpath/selection.hpp"
#include "mainpath/weighting.hpp"
