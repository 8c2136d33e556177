#pragma once

#include "adjvar/common/csv.hpp"
#include "adjvar/common/date.hpp"
#include "adjvar/common/keyvalue.hpp"
#include "adjvar/common/parallel.hpp"
#include "adjvar/common/random.hpp"
#include "adjvar/feature_matrix.hpp"
#include "adjvar/ingest.hpp"
#include "adjvar/models/forest.hpp"
#include "adjvar/models/linear.hpp"
#include "adjvar/models/metrics.hpp"
#include "adjvar/models/suite.hpp"
#include "adjvar/pipeline.hpp"
#include "adjvar/reference_data.hpp"
#include "adjvar/scoring.hpp"
#include "adjvar/stats.hpp"
#include "adjvar/svg.hpp"
#include "adjvar/synth.hpp"
#include "adjvar/timeseries.hpp"
