// Copyright 2026 The sdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDESIGN_SDESIGN_HPP
#define SDESIGN_SDESIGN_HPP

#include "sdesign/bitkit.hpp"
#include "sdesign/moments.hpp"
#include "sdesign/parallel.hpp"
#include "sdesign/phase_oracle.hpp"
#include "sdesign/randomizer.hpp"
#include "sdesign/rank_lab.hpp"
#include "sdesign/rng.hpp"
#include "sdesign/schedule.hpp"
#include "sdesign/shadow.hpp"
#include "sdesign/sparse_state.hpp"

#endif  // SDESIGN_SDESIGN_HPP
