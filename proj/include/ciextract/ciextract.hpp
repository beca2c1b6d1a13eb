// Copyright 2026 The CI Extractor Authors.
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

// Umbrella header.

#ifndef CIEXTRACT_CIEXTRACT_HPP_
#define CIEXTRACT_CIEXTRACT_HPP_

#include "ciextract/base.hpp"
#include "ciextract/config.hpp"
#include "ciextract/corpus.hpp"
#include "ciextract/dp_mapper.hpp"
#include "ciextract/evaluator.hpp"
#include "ciextract/hmm.hpp"
#include "ciextract/interchange.hpp"
#include "ciextract/pipeline.hpp"
#include "ciextract/refiner.hpp"
#include "ciextract/report.hpp"
#include "ciextract/srl_mapper.hpp"

#endif  // CIEXTRACT_CIEXTRACT_HPP_
