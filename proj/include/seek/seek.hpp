#pragma once

#include "seek/baselines.hpp"
#include "seek/dqn.hpp"
#include "seek/env.hpp"
#include "seek/eval.hpp"
#include "seek/features.hpp"
#include "seek/geometry.hpp"
#include "seek/mlp.hpp"
#include "seek/parity.hpp"
#include "seek/policy_blob.hpp"
#include "seek/replay.hpp"
#include "seek/rng.hpp"
#include "seek/source_model.hpp"
#include "seek/tinyinfer.hpp"
