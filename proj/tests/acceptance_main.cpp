// Copyright 2026 The stretchwalk Authors
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

// Runs every acceptance criterion through the C API and prints one line per
// criterion. Exit status is 0 only when all of them pass.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "stretchwalk/stretchwalk.h"

namespace {

void report(const sw_criterion* c, void* failures) {
  std::printf("%s criterion %2d: %s | %s (%.1fs)\n", c->passed ? "PASS" : "FAIL", c->id, c->title,
              c->detail, c->seconds);
  std::fflush(stdout);
  if (!c->passed) ++*static_cast<int*>(failures);
}

}  // namespace

int main(int argc, char** argv) {
  std::string config = "{}";
  if (argc > 1) config = std::string("{\"seed\": ") + argv[1] + "}";
  int failures = 0;
  sw_result* result = nullptr;
  const sw_status status = sw_verify(config.c_str(), report, &failures, &result);
  if (status != SW_OK) {
    std::printf("ERROR %s: %s\n", sw_status_name(status), sw_last_error());
    return 2;
  }
  sw_result_free(result);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
