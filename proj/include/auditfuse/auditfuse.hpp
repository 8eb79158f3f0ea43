// Copyright 2026 The auditfuse Authors
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

#pragma once

#include "auditfuse/adversary.hpp"
#include "auditfuse/analytic.hpp"
#include "auditfuse/as_printed.hpp"
#include "auditfuse/clusternet.hpp"
#include "auditfuse/config.hpp"
#include "auditfuse/csv.hpp"
#include "auditfuse/model.hpp"
#include "auditfuse/numeric.hpp"
#include "auditfuse/oracle.hpp"
#include "auditfuse/parallel.hpp"
#include "auditfuse/simcore.hpp"
