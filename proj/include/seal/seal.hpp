// Copyright 2026 The sealwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEAL_SEAL_HPP
#define SEAL_SEAL_HPP

#include "seal/adapter.hpp"
#include "seal/analysis.hpp"
#include "seal/attacks.hpp"
#include "seal/config.hpp"
#include "seal/container.hpp"
#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/operators.hpp"
#include "seal/passport.hpp"
#include "seal/pgm.hpp"
#include "seal/rng.hpp"
#include "seal/svd.hpp"
#include "seal/task.hpp"
#include "seal/train.hpp"
#include "seal/verify.hpp"

#endif  // SEAL_SEAL_HPP
