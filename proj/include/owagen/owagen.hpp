#pragma once

#include "owagen/calibrate.hpp"
#include "owagen/error.hpp"
#include "owagen/explore.hpp"
#include "owagen/generate.hpp"
#include "owagen/metrics.hpp"
#include "owagen/nelder_mead.hpp"
#include "owagen/truncnorm.hpp"
