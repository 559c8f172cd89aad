// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ptai/classify.hpp"
#include "ptai/decision.hpp"
#include "ptai/dsl.hpp"
#include "ptai/gadgets.hpp"
#include "ptai/machine_format.hpp"
#include "ptai/model.hpp"
#include "ptai/random_model.hpp"
#include "ptai/semantics.hpp"
#include "ptai/transform.hpp"
#include "ptai/valuation.hpp"
#include "ptai/zone.hpp"
