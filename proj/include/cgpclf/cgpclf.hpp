// Umbrella header.
#pragma once

#include "cgpclf/adasyn.hpp"
#include "cgpclf/baselines.hpp"
#include "cgpclf/common.hpp"
#include "cgpclf/crossval.hpp"
#include "cgpclf/datagen.hpp"
#include "cgpclf/dataset.hpp"
#include "cgpclf/engine.hpp"
#include "cgpclf/evolution.hpp"
#include "cgpclf/serialize.hpp"
