#pragma once

#include "ergofit/core_model.hpp"
#include "ergofit/dataset_io.hpp"
#include "ergofit/design.hpp"
#include "ergofit/design_config.hpp"
#include "ergofit/error.hpp"
#include "ergofit/fit.hpp"
#include "ergofit/format.hpp"
#include "ergofit/report.hpp"
#include "ergofit/spec_io.hpp"
#include "ergofit/stats.hpp"
