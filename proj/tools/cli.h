// Copyright 2026 The pointloc Authors. All Rights Reserved.
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

#ifndef POINTLOC_TOOLS_CLI_H_
#define POINTLOC_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace pointloc::cli {

// Runs the command line with args[0] as the program name. Errors are
// reported on err as a single line and yield a nonzero status.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pointloc::cli

#endif  // POINTLOC_TOOLS_CLI_H_
