// Copyright 2026 The schurkit Authors
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

#include "schurkit/cutting_plane.hpp"
#include "schurkit/eig.hpp"
#include "schurkit/lp.hpp"
#include "schurkit/matrix.hpp"
#include "schurkit/matrix_io.hpp"
#include "schurkit/norms.hpp"
#include "schurkit/oracles.hpp"
#include "schurkit/random.hpp"
#include "schurkit/sdp.hpp"
