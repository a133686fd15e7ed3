// Copyright 2026 The lincluster Authors
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

#include <iostream>

#include "lincluster/acceptance.hpp"

int main(int argc, char** argv) {
  lincluster::acceptance::AcceptanceOptions options;
  if (argc > 1) options.counts_path = argv[1];
  const auto results = lincluster::acceptance::run_acceptance(options);
  const int failures = lincluster::acceptance::print_results(std::cout, results);
  return failures == 0 ? 0 : 1;
}
