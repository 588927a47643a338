/*
 * Copyright 2026 The pivotmap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "pivotmap/clip.hpp"
#include "pivotmap/config.hpp"
#include "pivotmap/dvs_loss.hpp"
#include "pivotmap/error.hpp"
#include "pivotmap/eval.hpp"
#include "pivotmap/fit.hpp"
#include "pivotmap/geometry.hpp"
#include "pivotmap/hungarian.hpp"
#include "pivotmap/map_io.hpp"
#include "pivotmap/map_model.hpp"
#include "pivotmap/parallel.hpp"
#include "pivotmap/pivot_match.hpp"
#include "pivotmap/raster.hpp"
#include "pivotmap/simplify.hpp"
#include "pivotmap/synth.hpp"
