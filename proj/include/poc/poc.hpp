#pragma once

// Umbrella header.
#include "poc/agnostic.hpp"
#include "poc/aware_model.hpp"
#include "poc/compressor.hpp"
#include "poc/config.hpp"
#include "poc/curves.hpp"
#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/features.hpp"
#include "poc/importance.hpp"
#include "poc/latency.hpp"
#include "poc/metrics.hpp"
#include "poc/par.hpp"
#include "poc/pipeline.hpp"
#include "poc/predictor.hpp"
#include "poc/reader.hpp"
#include "poc/search.hpp"
#include "poc/spline.hpp"
#include "poc/synthetic.hpp"
#include "poc/tokenizer.hpp"
#include "poc/trainer.hpp"
