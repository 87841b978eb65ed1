// Copyright 2026 The axpaudit Authors
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

#include "axp/audit.hpp"
#include "axp/error.hpp"
#include "axp/explain.hpp"
#include "axp/ingest.hpp"
#include "axp/mining.hpp"
#include "axp/model.hpp"
#include "axp/model_io.hpp"
#include "axp/oracle.hpp"
#include "axp/report.hpp"
#include "axp/smtlib.hpp"
#include "axp/survey.hpp"
#include "axp/types.hpp"
