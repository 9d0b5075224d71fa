// Copyright 2026 The SALSA Workbench Authors.
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

#ifndef SALSA_SERVICE_H_
#define SALSA_SERVICE_H_

#include <memory>
#include <string>

#include "json.hpp"
#include "salsa/scoring.h"
#include "salsa/store.h"

namespace salsa {

// JSON-over-HTTP front end for a Store. The annotator is identified by the
// X-Annotator header. Error bodies look like
//   {"error": {"status": 400, "kind": "validation", "message": "...",
//              "violations": [{edit_id, code, message, span?}], "path": "..."}}
class Service {
 public:
  explicit Service(Store &store, WeightScheme weights = WeightScheme::Default());
  ~Service();
  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws Error when the address cannot be bound.
  int bind(const std::string &host, int port);
  // Serves until stop(). Requires a successful bind().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Maps a library exception to its HTTP status and error body.
int status_for(const std::exception &e);
nlohmann::json error_body(const std::exception &e);

}  // namespace salsa

#endif  // SALSA_SERVICE_H_
