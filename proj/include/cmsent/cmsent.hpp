#pragma once

#include "cmsent/corpus.hpp"
#include "cmsent/error.hpp"
#include "cmsent/eval.hpp"
#include "cmsent/features.hpp"
#include "cmsent/kernel.hpp"
#include "cmsent/model_io.hpp"
#include "cmsent/pipeline.hpp"
#include "cmsent/preprocess.hpp"
#include "cmsent/svr.hpp"
#include "cmsent/tuning.hpp"
