#pragma once

#include "paydev/civil_time.hpp"
#include "paydev/config.hpp"
#include "paydev/csv.hpp"
#include "paydev/error.hpp"
#include "paydev/eval/baselines.hpp"
#include "paydev/eval/cross_validate.hpp"
#include "paydev/eval/folds.hpp"
#include "paydev/eval/metrics.hpp"
#include "paydev/eval/per_commit.hpp"
#include "paydev/eval/report.hpp"
#include "paydev/eval/synth.hpp"
#include "paydev/features.hpp"
#include "paydev/identity.hpp"
#include "paydev/ingest.hpp"
#include "paydev/io.hpp"
#include "paydev/labels.hpp"
#include "paydev/linkage.hpp"
#include "paydev/ml/dataset.hpp"
#include "paydev/ml/forest.hpp"
#include "paydev/ml/logit.hpp"
#include "paydev/ml/model.hpp"
#include "paydev/ml/tree.hpp"
#include "paydev/rng.hpp"
#include "paydev/text.hpp"
