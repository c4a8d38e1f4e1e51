#pragma once

#include "horoflow/ball_model.hpp"
#include "horoflow/curve.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/families.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/hyperbolic.hpp"
#include "horoflow/io.hpp"
#include "horoflow/quermass.hpp"
#include "horoflow/rng.hpp"
#include "horoflow/runner.hpp"
#include "horoflow/spectral.hpp"
#include "horoflow/symfunc.hpp"
