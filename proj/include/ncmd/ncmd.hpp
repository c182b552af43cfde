/*
 * Copyright 2026 The ncmd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NCMD_NCMD_HPP
#define NCMD_NCMD_HPP

#include "ncmd/config.hpp"
#include "ncmd/coupon.hpp"
#include "ncmd/diagnostics.hpp"
#include "ncmd/distributions.hpp"
#include "ncmd/families.hpp"
#include "ncmd/format.hpp"
#include "ncmd/logprob.hpp"
#include "ncmd/montecarlo.hpp"
#include "ncmd/rate_function.hpp"
#include "ncmd/report_io.hpp"
#include "ncmd/rng.hpp"
#include "ncmd/rvtoolkit.hpp"
#include "ncmd/scalings.hpp"

#endif  // NCMD_NCMD_HPP
