// Copyright 2026 The Datavoid Authors
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

#include "datavoid/clients.hpp"

#include "datavoid/error.hpp"

namespace datavoid {

ParseResult CrowdTangleClientStub::fetch(const FetchRequest& request) {
  throw fatal_error("live API access is not available (list " + request.list_id +
                    "); export posts to JSON Lines and ingest the files");
}

}  // namespace datavoid
