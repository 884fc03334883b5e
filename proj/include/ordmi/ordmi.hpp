// Copyright 2026 The ordmi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORDMI_ORDMI_HPP_
#define ORDMI_ORDMI_HPP_

#include "ordmi/data.hpp"
#include "ordmi/design.hpp"
#include "ordmi/errors.hpp"
#include "ordmi/estimands.hpp"
#include "ordmi/glm.hpp"
#include "ordmi/imputation.hpp"
#include "ordmi/io.hpp"
#include "ordmi/link.hpp"
#include "ordmi/outcome.hpp"
#include "ordmi/pipeline.hpp"
#include "ordmi/pooling.hpp"
#include "ordmi/prior.hpp"
#include "ordmi/rng.hpp"
#include "ordmi/sensitivity.hpp"
#include "ordmi/simulation.hpp"
#include "ordmi/spline.hpp"

#endif  // ORDMI_ORDMI_HPP_
