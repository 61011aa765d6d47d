// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "normcx/chow.hpp"
#include "normcx/error.hpp"
#include "normcx/fan.hpp"
#include "normcx/linalg.hpp"
#include "normcx/matroid.hpp"
#include "normcx/montecarlo.hpp"
#include "normcx/multipoly.hpp"
#include "normcx/normal.hpp"
#include "normcx/rational.hpp"
#include "normcx/sampling.hpp"
