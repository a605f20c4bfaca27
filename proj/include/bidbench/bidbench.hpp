#pragma once

#include "bidbench/color.hpp"
#include "bidbench/compose.hpp"
#include "bidbench/error.hpp"
#include "bidbench/evaluate.hpp"
#include "bidbench/filter.hpp"
#include "bidbench/image.hpp"
#include "bidbench/linmix.hpp"
#include "bidbench/manifest.hpp"
#include "bidbench/metrics.hpp"
#include "bidbench/mode.hpp"
#include "bidbench/overlay.hpp"
#include "bidbench/png_io.hpp"
#include "bidbench/preview.hpp"
#include "bidbench/raindrop.hpp"
#include "bidbench/random.hpp"
#include "bidbench/scenario.hpp"
#include "bidbench/synth.hpp"
#include "bidbench/tasks.hpp"
#include "bidbench/weather.hpp"
