// mixfuse/mixfuse.hpp
//
// Copyright 2026  The mixfuse authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXFUSE_MIXFUSE_HPP_
#define MIXFUSE_MIXFUSE_HPP_

#include "mixfuse/alignment.hpp"
#include "mixfuse/corpus_io.hpp"
#include "mixfuse/fusion.hpp"
#include "mixfuse/grammar.hpp"
#include "mixfuse/metrics.hpp"
#include "mixfuse/orthography.hpp"
#include "mixfuse/rational.hpp"
#include "mixfuse/rover.hpp"
#include "mixfuse/synth.hpp"
#include "mixfuse/textutil.hpp"

#endif  // MIXFUSE_MIXFUSE_HPP_
